from click.testing import CliRunner

from campus_inventory.cli import main
from campus_inventory.storage import Page, Store


def test_seed_command(tmp_path):
    db = str(tmp_path / "inv.db")
    result = CliRunner().invoke(main, ["seed", "--db", db])
    assert result.exit_code == 0, result.output
    assert "username 'test'" in result.output
    store = Store(db)
    rows, total = store.list_records("license", Page())
    assert total == 5
    store.close()


def test_import_command(tmp_path):
    db = str(tmp_path / "inv.db")
    CliRunner().invoke(main, ["seed", "--db", db])
    csv_file = tmp_path / "assets.csv"
    csv_file.write_text("c-1,sn1,Computer\nc-2,sn2,Desk\n")
    result = CliRunner().invoke(main, [
        "import", "asset", str(csv_file),
        "--columns", "barcode,serial,type", "--location", "1", "--db", db])
    assert result.exit_code == 0, result.output
    assert "created: 2" in result.output
    store = Store(db)
    _, total = store.list_records("asset", Page())
    assert total == 2
    # the operator is named in the trail
    assert store.history_of(1)[0]["modified_by"] == "cli"
    store.close()


def test_import_command_reports_failures(tmp_path):
    db = str(tmp_path / "inv.db")
    CliRunner().invoke(main, ["seed", "--db", db])
    csv_file = tmp_path / "assets.csv"
    csv_file.write_text("c-1,sn1,Computer\nc-1,sn2,NotAType\n")
    result = CliRunner().invoke(main, [
        "import", "asset", str(csv_file),
        "--columns", "barcode,serial,type", "--location", "1", "--db", db])
    assert result.exit_code == 1
    assert "row 2 failed" in result.output


def test_serve_help():
    result = CliRunner().invoke(main, ["serve", "--help"])
    assert result.exit_code == 0
    assert "--tls-cert" in result.output
