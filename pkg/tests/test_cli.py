import json

import pytest

from dtorder.ui.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_run_builtin_corrections_example(capsys):
    code, out = _run(capsys, "run", "--trace", "builtin:corrections-example", "--heuristic", "OOLCMR", "--capacity", "9")
    assert code == 0
    assert "makespan: 33" in out
    assert "omim: " in out


def test_run_defaults_to_builtin_capacity(capsys):
    code, out = _run(capsys, "run", "--trace", "builtin:static-example", "--heuristic", "docps")
    assert code == 0
    assert "capacity: 6" in out
    assert "makespan: 14" in out


def test_oracle_free_order_on_order_gap(capsys):
    code, out = _run(capsys, "oracle", "--trace", "builtin:order-gap", "--capacity", "10", "--free-order")
    assert code == 0
    lines = dict(line.split(": ", 1) for line in out.splitlines())
    assert lines["makespan"] == "22"
    assert lines["comm order"] != lines["comp order"]


def test_oracle_size_limit_is_a_usage_error(capsys):
    code, _ = _run(capsys, "oracle", "--trace", "builtin:order-gap", "--limit", "3")
    assert code == 2


def test_gen_gadget_then_characterize(tmp_path, capsys):
    trace = str(tmp_path / "gadget.csv")
    code, out = _run(capsys, "gen", "--gadget-3par", "--a", "2,2,2", "--m", "1", "--out", trace)
    assert code == 0
    assert "capacity: 21" in out and "target: 21" in out
    code, out = _run(capsys, "characterize", "--trace", trace)
    assert code == 0
    assert "sum_comm: 21" in out
    assert "sum_comp: 21" in out


def test_gen_synthetic(tmp_path, capsys):
    trace = tmp_path / "w.csv"
    code, out = _run(capsys, "gen", "--profile", "heterogeneous", "--n", "20", "--seed", "3", "--out", str(trace))
    assert code == 0
    assert "tasks: 20" in out
    assert trace.read_bytes().startswith(b"task_id,comm_time,comp_time,mem_bytes\n")


def test_schedule_json_round_trips_through_validate(tmp_path, capsys):
    schedule = str(tmp_path / "schedule.json")
    code, _ = _run(capsys, "run", "--trace", "builtin:dynamic-example", "--heuristic", "LCMR", "--schedule-out", schedule)
    assert code == 0
    code, out = _run(capsys, "validate", "--trace", "builtin:dynamic-example", "--schedule", schedule)
    assert code == 0
    assert "feasible, makespan: 23" in out


def test_validate_reports_violations(tmp_path, capsys):
    schedule = tmp_path / "bad.json"
    schedule.write_text(json.dumps([{"id": i, "comm_start": 0, "comp_start": 0} for i in range(4)]), encoding="utf-8")
    code, out = _run(capsys, "validate", "--trace", "builtin:static-example", "--schedule", str(schedule))
    assert code == 1
    assert "comm_overlap" in out


def test_validate_nan_start_is_an_input_error(tmp_path, capsys):
    schedule = tmp_path / "nan.json"
    rows = [{"id": i, "comm_start": float("nan"), "comp_start": float("nan")} for i in range(4)]
    schedule.write_text(json.dumps(rows), encoding="utf-8")
    code, _ = _run(capsys, "validate", "--trace", "builtin:static-example", "--schedule", str(schedule))
    assert code == 2


def test_undecodable_trace_is_an_input_error(tmp_path, capsys):
    trace = tmp_path / "bad.csv"
    trace.write_bytes(b"task_id,comm_time,comp_time\n0,1,\xff\n")
    code, _ = _run(capsys, "characterize", "--trace", str(trace))
    assert code == 2


def test_run_with_lp_window_and_batches(capsys):
    code, out = _run(capsys, "run", "--trace", "builtin:corrections-example", "--heuristic", "lp.3", "--batch", "2",
                     "--print-schedule")
    assert code == 0
    rows = json.loads(out[out.index("["):])
    assert sorted(row["id"] for row in rows) == [0, 1, 2, 3, 4]


def test_export_milp_to_file(tmp_path, capsys):
    out_file = tmp_path / "model.lp"
    code, _ = _run(capsys, "export-milp", "--trace", "builtin:order-gap", "--out", str(out_file))
    assert code == 0
    assert "memory_0" in out_file.read_text(encoding="utf-8")


def test_sweep_writes_reports(tmp_path, capsys):
    out_dir = tmp_path / "reports"
    code, _ = _run(capsys, "sweep", "--trace", "builtin:static-example", "builtin:corrections-example",
                   "--heuristics", "OOSIM,OOLCMR", "--out", str(out_dir))
    assert code == 0
    csv_lines = (out_dir / "sweep.csv").read_text(encoding="utf-8").splitlines()
    assert csv_lines[0] == "workload,capacity_factor,heuristic,makespan,ratio"
    assert len(csv_lines) == 1 + 2 * 9 * 2
    assert (out_dir / "report.html").exists()


def test_catalog_lists_every_heuristic(capsys):
    code, out = _run(capsys, "catalog")
    assert code == 0
    assert "OOMAMR" in out and "lp.k" in out


@pytest.mark.parametrize("argv", [
    ["run", "--trace", "builtin:nope", "--heuristic", "OOSIM"],
    ["run", "--trace", "builtin:static-example", "--heuristic", "FASTEST"],
    ["run", "--trace", "builtin:static-example", "--heuristic", "lp.9"],
    ["run", "--trace", "/no/such/file.csv", "--heuristic", "OOSIM"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_infeasible_capacity_exits_1(capsys):
    code, _ = _run(capsys, "run", "--trace", "builtin:static-example", "--heuristic", "OOSIM", "--capacity", "1")
    assert code == 1


def test_unhandled_exception_goes_to_crash_log(tmp_path, monkeypatch):
    from dtorder.dtorder import handle_unhandled_exception

    log_file = tmp_path / "logs" / "crash.log"
    monkeypatch.setenv("DTORDER_CRASH_LOG_FILE", str(log_file))
    try:
        raise RuntimeError("boom")
    except RuntimeError as e:
        exc = e
    with pytest.raises(SystemExit) as info:
        handle_unhandled_exception(RuntimeError, exc, exc.__traceback__)
    assert info.value.code == 1
    text = log_file.read_text(encoding="utf-8")
    assert "Unhandled Exception" in text and "boom" in text
