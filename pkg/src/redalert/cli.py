"""Command-line surface.

The CLI is a thin client of the HTTP service: it assembles a request,
POSTs it (by default against the in-process app, or against --server),
and writes the response to stdout / --out.

Exit codes: 0 success, 2 invalid input, 3 resource cap exceeded.
"""

import json
import sys
from typing import Optional

import click
import httpx

from .service.app import app as service_app

EXIT_INVALID = 2
EXIT_RESOURCE = 3


def _client(server: Optional[str]) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    # in-process: drive the ASGI app directly, no socket involved
    from fastapi.testclient import TestClient

    return TestClient(service_app, raise_server_exceptions=False)


def _post(server: Optional[str], path: str, payload: dict) -> dict:
    with _client(server) as client:
        resp = client.post(path, json=payload)
    if resp.status_code in (400, 422):
        detail = resp.json().get("detail")
        click.echo(f"error: invalid input: {detail}", err=True)
        sys.exit(EXIT_INVALID)
    if resp.status_code == 409:
        detail = resp.json().get("detail")
        click.echo(f"error: resource cap: {detail}", err=True)
        sys.exit(EXIT_RESOURCE)
    resp.raise_for_status()
    return resp.json()


def _load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        config = json.load(fh)
    if not isinstance(config, dict):
        click.echo("error: config must be a flat JSON object", err=True)
        sys.exit(EXIT_INVALID)
    return config


def _merged(config: dict, **flags) -> dict:
    out = dict(config)
    for key, value in flags.items():
        if value is not None:
            out[key] = value
    return out


@click.group()
def main():
    """Red-alert coding laboratory: exponents, figure data and simulations."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="Flat JSON config with request fields.")
@click.option("--p-avg-db", type=float, default=None)
@click.option("--p-alert-db", type=float, default=None)
@click.option("--noise-var", type=float, default=None)
@click.option("--points", type=int, default=None)
@click.option("--units", type=click.Choice(["nats", "bits"]), default=None)
@click.option("--out", type=click.Path(), default=None, help="Optional CSV output path.")
@click.option("--server", default=None, help="Service URL; defaults to in-process.")
def exponent(config_path, p_avg_db, p_alert_db, noise_var, points, units, out, server):
    """Print a rate sweep of the red-alert exponents."""
    cfg = _merged(_load_config(config_path), p_avg_db=p_avg_db, p_alert_db=p_alert_db,
                  noise_var=noise_var, points=points, units=units)
    if "p_avg_db" not in cfg or "p_alert_db" not in cfg:
        click.echo("error: p_avg_db and p_alert_db are required", err=True)
        sys.exit(EXIT_INVALID)
    payload = {
        "channel": {
            "p_avg_db": cfg["p_avg_db"],
            "p_alert_db": cfg["p_alert_db"],
            "noise_var": cfg.get("noise_var", 1.0),
        },
        "points": cfg.get("points", 101),
        "units": cfg.get("units", "nats"),
    }
    data = _post(server, "/exponent", payload)
    header = ["rate", "e_offset", "e_conical_printed", "e_conical_corrected", "capacity"]
    click.echo(f"# units: {data['units']}")
    click.echo("\t".join(header))
    lines = []
    for row in data["rows"]:
        values = [row[k] for k in header]
        click.echo("\t".join(f"{v:.9f}" for v in values))
        lines.append(",".join(repr(float(v)) for v in values))
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write("# redalert exponent sweep; units " + data["units"] + "\n")
            fh.write(",".join(header) + "\n")
            fh.write("\n".join(lines) + "\n")


@main.command()
@click.argument("name", type=click.Choice(["fig7", "fig8", "fig10"]))
@click.option("--points", type=int, default=None)
@click.option("--out", type=click.Path(), default=None, help="CSV output path.")
@click.option("--server", default=None)
def figure(name, points, out, server):
    """Emit the CSV data behind one of the named figures."""
    payload = {"name": name}
    if points is not None:
        payload["points"] = points
    data = _post(server, "/figure", payload)
    if out is None:
        out = f"{name}.csv"
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(data["csv"])
    click.echo(f"wrote {out}")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="Flat JSON config; flags override config values.")
@click.option("--n", type=int, default=None)
@click.option("--rate-nats", type=float, default=None)
@click.option("--rate-bits", type=float, default=None)
@click.option("--epsilon-nats", type=float, default=None)
@click.option("--epsilon-bits", type=float, default=None)
@click.option("--p-avg-db", type=float, default=None)
@click.option("--p-alert-db", type=float, default=None)
@click.option("--noise-var", type=float, default=None)
@click.option("--bsc-p", type=float, default=None)
@click.option("--bsc-q", type=float, default=None)
@click.option("--trials", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--delta", type=float, default=None)
@click.option("--workers", type=int, default=None)
@click.option("--codeword-cap", type=int, default=None)
@click.option("--out", type=click.Path(), default="results.json")
@click.option("--server", default=None)
def simulate(config_path, n, rate_nats, rate_bits, epsilon_nats, epsilon_bits,
             p_avg_db, p_alert_db, noise_var, bsc_p, bsc_q, trials, seed, delta,
             workers, codeword_cap, out, server):
    """Build a codebook, run Monte Carlo trials and write a JSON results file."""
    cfg = _merged(_load_config(config_path), n=n, rate_nats=rate_nats,
                  rate_bits=rate_bits, epsilon_nats=epsilon_nats,
                  epsilon_bits=epsilon_bits, p_avg_db=p_avg_db,
                  p_alert_db=p_alert_db, noise_var=noise_var, bsc_p=bsc_p,
                  bsc_q=bsc_q, trials=trials, seed=seed, delta=delta,
                  workers=workers, codeword_cap=codeword_cap)
    payload = {k: cfg[k] for k in
               ("n", "rate_nats", "rate_bits", "epsilon_nats", "epsilon_bits",
                "trials", "seed", "delta", "workers", "codeword_cap",
                "weight_threshold") if k in cfg}
    if cfg.get("bsc_p") is not None:
        payload["bsc"] = {"p": cfg["bsc_p"], "q": cfg["bsc_q"]}
    elif cfg.get("p_avg_db") is not None:
        payload["awgn"] = {
            "p_avg_db": cfg["p_avg_db"],
            "p_alert_db": cfg.get("p_alert_db", cfg["p_avg_db"]),
            "noise_var": cfg.get("noise_var", 1.0),
        }
    else:
        click.echo("error: provide AWGN (p_avg_db) or BSC (bsc_p, bsc_q) parameters",
                   err=True)
        sys.exit(EXIT_INVALID)
    data = _post(server, "/simulate", payload)
    text = json.dumps(data["result"], indent=2, sort_keys=True) + "\n"
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    est = data["result"]["estimates"]
    click.echo(f"wrote {out}")
    click.echo(f"log_p_md={est['log_p_md']:.6f} p_fa={est['p_fa']:.6g} "
               f"p_msg={est['p_msg']}")


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the HTTP service (requires uvicorn)."""
    import uvicorn

    uvicorn.run("redalert.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
