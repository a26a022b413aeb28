import json

from click.testing import CliRunner

from co3geo.cli import co3


def test_selftest_passes():
    result = CliRunner().invoke(co3, ["selftest"])
    assert result.exit_code == 0, result.output
    assert "fail" not in result.output.lower()


def test_small_groups_passes(tmp_path):
    report = tmp_path / "report.json"
    result = CliRunner().invoke(
        co3, ["small-groups", "--report", str(report)])
    assert result.exit_code == 0, result.output
    entries = json.loads(report.read_text())["checks"]
    assert entries
    assert all(e["status"] == "pass" for e in entries)


def test_dump_and_collapse_roundtrip(tmp_path):
    runner = CliRunner()
    cx = tmp_path / "s4_bouc.json"
    result = runner.invoke(
        co3, ["dump-complex", "--group", "s4", "--collection", "bouc",
              "-o", str(cx)])
    assert result.exit_code == 0, result.output

    result = runner.invoke(co3, ["collapse", str(cx)])
    assert result.exit_code == 0, result.output
    sched = tmp_path / "schedule.txt"
    sched.write_text(result.output)

    result = runner.invoke(
        co3, ["collapse", str(cx), "--schedule", str(sched)])
    assert result.exit_code == 0, result.output


def test_collapse_rejects_garbage_input(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("this is not a complex")
    result = CliRunner().invoke(co3, ["collapse", str(bad)])
    assert result.exit_code == 2


def test_missing_generator_file_is_a_usage_error(tmp_path):
    result = CliRunner().invoke(
        co3, ["calibrate", "--gens", str(tmp_path / "nope.txt")])
    assert result.exit_code == 2
