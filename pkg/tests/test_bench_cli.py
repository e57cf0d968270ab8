import csv
import io
import json

from fracsum.bench_cli import RunConfig, main, reproduce_all, run
from fracsum.numerics import DOUBLE, QUAD, make_context
from fracsum.reference_tables import REFERENCE_TABLES, parse_number


def test_parse_number_styles(qctx):
    assert parse_number("3.68D-01", qctx) == qctx.mpf("0.368")
    assert parse_number("4.65e-04", qctx) == qctx.mpf("4.65e-4")
    assert parse_number("5.17+157", qctx) == qctx.mpf("5.17e157")
    assert parse_number("1.24+250", qctx) == qctx.mpf("1.24e250")
    assert parse_number("-2.72D+00", qctx) == qctx.mpf("-2.72")


def test_reference_tables_cover_all_builtins():
    assert len(REFERENCE_TABLES) == 25
    assert len({t.problem for t in REFERENCE_TABLES}) == 16


def test_run_depth_zero_single_row():
    report = run(RunConfig(problem="ex5_2", schedule="aps:1,1", depth=0))
    assert len(report.rows) == 1
    row = report.rows[0]
    assert row.n == 0 and row.R == 1
    assert row.col3 == row.col4  # A(0,0) is A_{R_0} itself
    assert "A(0,0)" in report.summary["best entry"]


def test_run_reproduces_reference_rows():
    report = run(RunConfig(problem="ex5_2", schedule="aps:1,1", depth=28))
    last = report.rows[-1]
    assert last.n == 28
    ctx = make_context(QUAD)
    assert parse_number(last.col4, ctx) <= 1e-31
    report2 = run(RunConfig(problem="ex5_1", schedule="gps:1.3", depth=32))
    last2 = report2.rows[-1]
    assert last2.R == 5258
    assert parse_number(last2.col4, ctx) <= 1e-31


def test_run_output_byte_stable():
    config = RunConfig(problem="ex5_4", schedule="aps:1,1", depth=12)
    assert run(config).text() == run(config).text()


def test_run_formats_carry_identical_values():
    config = RunConfig(problem="ex5_8", schedule="aps:1,1", depth=12)
    report = run(config)
    text_rows = [[str(r.n), str(r.R), r.col3, r.col4, r.gamma, r.lam] for r in report.rows]

    parsed_csv = list(csv.reader(io.StringIO(report.to_csv())))
    csv_rows = [row for row in parsed_csv[1:] if row[0] != "summary"]
    assert csv_rows == text_rows

    doc = json.loads(report.to_json())
    json_rows = [[str(c) for c in row] for row in doc["rows"]]
    assert json_rows == text_rows
    assert doc["summary"] == report.summary


def test_run_value_columns_for_unknown_limit():
    report = run(RunConfig(problem="ex5_6", schedule="aps:1,1", depth=16))
    assert not report.has_S
    assert report.rows[-1].col4.startswith("-1.0239607320490606")


def test_run_stride():
    report = run(RunConfig(problem="ex5_2", schedule="aps:1,1", depth=16, stride=8))
    assert [r.n for r in report.rows] == [0, 8, 16]


def test_run_problem_file(tmp_path):
    spec = tmp_path / "p.json"
    spec.write_text(json.dumps({"builtin": "ex5_2", "schedule": "aps:1,1"}))
    report = run(RunConfig(problem_file=str(spec), depth=8))
    assert report.problem == "ex5_2"
    assert report.schedule == "aps:1,1"


def test_run_complex_expression_problem(tmp_path):
    spec = tmp_path / "c.json"
    spec.write_text(
        json.dumps({"name": "osc", "expression": "exp(i*sqrt(n))/n**2", "m": 2})
    )
    report = run(RunConfig(problem_file=str(spec), schedule="gps:1.3", depth=12))
    assert "i" in report.rows[-1].col3  # complex sample column renders
    assert report.summary["value"]


def test_cli_run_and_errors(capsys):
    assert main(["run", "ex5_2", "--schedule", "aps:1,1", "--depth", "8"]) == 0
    out = capsys.readouterr().out
    assert "best entry" in out

    assert main(["run", "ex9_9"]) == 1
    assert "unknown builtin" in capsys.readouterr().err

    assert main(["run", "ex5_2", "--schedule", "xps:1"]) == 1
    assert "schedule" in capsys.readouterr().err

    assert main(["run"]) == 1
    assert "no problem" in capsys.readouterr().err


def test_cli_list(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert "ex5_1" in out and "ex7_2" in out


def test_cli_classify(capsys):
    assert main(["classify", "--m", "2", "--mu", "0", "--c", "1,0,-3/2"]) == 0
    out = capsys.readouterr().out
    assert "gamma   = -3/2" in out
    assert "sigma   = 1" in out
    assert "verdict = converges" in out


def test_cli_classify_complex(capsys):
    assert main(["classify", "--m", "1", "--mu", "0", "--c", "0.5,1"]) == 0
    out = capsys.readouterr().out
    assert "verdict = converges" in out


def test_cli_reproduce_only(capsys):
    assert main(["reproduce", "--only", "ex7_1"]) == 0
    out = capsys.readouterr().out
    assert "ex7_1" in out and "fail=0" in out


def test_cli_reproduce_unknown_id(capsys):
    assert main(["reproduce", "--only", "nope"]) == 1
    assert "no reference tables" in capsys.readouterr().err


def test_reproduce_double_marks_precision_limited():
    report = reproduce_all(DOUBLE, only="ex5_3")
    assert report.exit_code == 2
    text = report.text()
    assert "precision-limited" in text
    assert all(o.count("fail") == 0 for o in report.outcomes)


def test_reproduce_json_format():
    report = reproduce_all(QUAD, only="ex5_2")
    doc = json.loads(report.to_json())
    assert doc["exit_code"] == 0
    assert doc["tables"][0]["problem"] == "ex5_2"
