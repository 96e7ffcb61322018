"""Operator command line: serve the API, seed a database, import files.

Configuration comes from options or INVENTORY_* environment variables:
INVENTORY_DB, INVENTORY_ADDR, INVENTORY_PORT, INVENTORY_TLS_CERT,
INVENTORY_TLS_KEY, INVENTORY_SESSION_TTL (minutes), INVENTORY_SEED.
"""

from __future__ import annotations

import os
from pathlib import Path

import click

from .ingest import ImportSpec, import_rows_as, parse_delimited
from .seed import seed_all
from .storage import Store


@click.group()
def main():
    """Campus inventory service."""


@main.command()
@click.option("--host", default=lambda: os.environ.get("INVENTORY_ADDR", "127.0.0.1"),
              show_default="INVENTORY_ADDR or 127.0.0.1")
@click.option("--port", type=int,
              default=lambda: int(os.environ.get("INVENTORY_PORT", "8000")),
              show_default="INVENTORY_PORT or 8000")
@click.option("--db", default=lambda: os.environ.get("INVENTORY_DB", "inventory.db"),
              show_default="INVENTORY_DB or inventory.db")
@click.option("--tls-cert", default=lambda: os.environ.get("INVENTORY_TLS_CERT"),
              help="Path to the TLS certificate; plain HTTP when omitted.")
@click.option("--tls-key", default=lambda: os.environ.get("INVENTORY_TLS_KEY"))
@click.option("--seed/--no-seed", "do_seed", default=False,
              help="Seed roles, the admin user and the demo fixture first.")
def serve(host, port, db, tls_cert, tls_key, do_seed):
    """Run the HTTP service."""
    import uvicorn

    from .api import create_app

    app = create_app(db_path=db, seed=do_seed)
    uvicorn.run(app, host=host, port=port,
                ssl_certfile=tls_cert, ssl_keyfile=tls_key)


@main.command()
@click.option("--db", default=lambda: os.environ.get("INVENTORY_DB", "inventory.db"))
@click.option("--admin-password", default="test", show_default=True)
def seed(db, admin_password):
    """Create built-in roles, the 'test' administrator and demo data."""
    store = Store(db)
    try:
        created = seed_all(store, admin_password=admin_password)
    finally:
        store.close()
    click.echo(f"admin person_id={created['admin_id']} (username 'test')")
    click.echo(f"storage location_id={created['location_id']}")
    click.echo(f"licenses={created['license_ids']}")


@main.command("import")
@click.argument("kind", type=click.Choice(["asset", "license", "location"]))
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--columns", required=True,
              help="Comma-separated field names, one per CSV column.")
@click.option("--location", type=int, default=None,
              help="Default location id (required for assets).")
@click.option("--db", default=lambda: os.environ.get("INVENTORY_DB", "inventory.db"))
@click.option("--actor", default="cli", show_default=True,
              help="Username recorded in the audit trail.")
def import_file(kind, file, columns, location, db, actor):
    """Import a CSV file of assets, licenses or locations."""
    mapping = tuple(name.strip() for name in columns.split(","))
    spec = ImportSpec(kind=kind, column_count=len(mapping),
                      column_mapping=mapping, default_location=location)
    text = Path(file).read_text(encoding="utf-8")
    store = Store(db)
    try:
        report = import_rows_as(store, parse_delimited(text, spec), spec, actor)
    finally:
        store.close()
    click.echo(f"created: {len(report.created)}")
    for row, reason in report.failed:
        click.echo(f"row {row} failed: {reason}")
    if report.failed:
        raise SystemExit(1)


if __name__ == "__main__":
    main()
