"""Command-line interface: output shape, determinism and exit codes."""

import json

import pytest

from biaslab.cli import (EXIT_GUARD, EXIT_OK, EXIT_USAGE, EXIT_VERIFY,
                         UsageError, main, parse_group_spec)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_group_spec():
    assert parse_group_spec("5^3") == {"kind": "abelian", "orders": (5, 5, 5)}
    assert parse_group_spec("9^2x3") == {"kind": "abelian",
                                         "orders": (9, 9, 3)}
    assert parse_group_spec("7") == {"kind": "abelian", "orders": (7,)}
    assert parse_group_spec("q8 x 17^3") == {"kind": "q8p", "p": 17}
    with pytest.raises(UsageError):
        parse_group_spec("frieze")
    with pytest.raises(UsageError):
        parse_group_spec("1^3")


def test_obstruction_command_json(capsys):
    code, out, _ = run(capsys, "obstruction", "--group", "5^3")
    assert code == EXIT_OK
    obj = json.loads(out)
    assert obj["B_order"] == 2
    assert obj["B_Q_order"] == 2


def test_output_is_deterministic(capsys):
    _, first, _ = run(capsys, "units", "--m", "65")
    _, second, _ = run(capsys, "units", "--m", "65")
    assert first == second
    obj = json.loads(first)
    assert len(obj["pm_square_classes"]) == 4


def test_human_flag_appends_lines(capsys):
    code, out, _ = run(capsys, "lift-square", "--a", "2", "--m", "5",
                       "--human")
    assert code == EXIT_OK
    json_part, _, rest = out.partition("\n}")
    json.loads(json_part + "\n}")
    assert rest.strip()     # human lines follow the JSON object


def test_parity_command(capsys):
    code, out, _ = run(capsys, "parity", "--d-max", "8", "--n-max", "8")
    assert code == EXIT_OK
    obj = json.loads(out)
    assert obj["clean"] is True


def test_usage_errors_exit_two(capsys):
    code, _, err = run(capsys, "obstruction", "--group", "nonsense")
    assert code == EXIT_USAGE
    assert "error" in err
    code, _, _ = run(capsys, "no-such-command")
    assert code == EXIT_USAGE
    code, _, _ = run(capsys, "lift-square", "--a", "5", "--m", "10")
    assert code == EXIT_USAGE


def test_guard_exit_three(capsys):
    code, _, err = run(capsys, "units", "--m", "100000007")
    assert code == EXIT_GUARD
    assert "guard" in err


def test_table_examples_reports_bound_failures(capsys):
    # even square-free orders violate the counting bound, exit 1
    code, out, _ = run(capsys, "table-examples", "--limit", "30")
    assert code == EXIT_VERIFY
    obj = json.loads(out)
    assert obj["failures"]
    assert all(m % 2 == 0 for m, _, _ in obj["failures"])


def test_double_command_with_verification(capsys):
    code, out, _ = run(capsys, "double", "--group", "3^2", "--r", "2",
                       "--verify")
    assert code == EXIT_OK
    obj = json.loads(out)
    assert obj["nu"] == [[2]] or obj["nu"] == [[1]]
