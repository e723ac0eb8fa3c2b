import json

import pytest

from ihall.cli import main, parse_element, parse_tokens, run
from ihall.ihallalg import IHallContext
from ihall.quiver import linear_quiver, validate_iquiver


def test_product_prints_reduced_form():
    code, out = run(["product", "--quiver", "a2", "--q", "2", "S1", "S2"])
    assert code == 0
    assert "1/2*v*[S1+S2] + 1/2*v*[U(1,1)]" in out


def test_json_schema():
    code, out = run(["verify", "iserre", "--a", "1", "--b", "0", "--q", "2", "--format", "json"])
    data = json.loads(out)
    assert code == 0
    assert {c["status"] for c in data["checks"]} == {"OK"}
    assert all(set(c) == {"id", "status", "detail"} for c in data["checks"])


@pytest.mark.parametrize("argv", [
    ["product", "--quiver", "a2", "--q", "4", "S1"],
    ["product", "--quiver", "missing.json", "S1"],
    ["product", "--quiver", "a2", "Q1"],
    ["product", "--quiver", "a2", "S7"],
    ["product", "--quiver", "a2", "S1^-1"],
    ["verify", "nothing"],
    ["enumerate", "--quiver", "a2", "--max-dim", "0"],
])
def test_parse_errors_exit_2(argv):
    assert run(argv)[0] == 2


def test_capacity_exit_3():
    code, _ = run(["verify", "serre", "--a", "2", "--b", "1", "--q", "3", "--max-hom-dim", "1"])
    assert code == 3


def test_round_trip():
    ctx = IHallContext(validate_iquiver(linear_quiver(2)), 3)
    x = parse_tokens(ctx, ["S1", "S2", "S1", "K2^-1"])
    assert parse_element(ctx, ctx.render(x)) == x


def test_deterministic_output():
    argv = ["verify", "rank-two", "--q", "2"]
    assert run(argv) == run(argv)


def test_main_entry_point(capsys):
    assert main(["verify", "tilde-t", "--max-ab", "2"]) == 0
    assert "tilde-t OK" in capsys.readouterr().out


def test_symfun_commands():
    code, out = run(["symfun", "ihl", "--partition", "1,1"])
    assert code == 0 and "(t - 1)*theta" in out
    assert run(["symfun", "jordan-iso", "--max-size", "2", "--q", "3"])[0] == 0
    assert run(["symfun", "steinitz", "--max-total", "3", "--q", "2"])[0] == 0


def test_reflect_and_enumerate():
    code, out = run(["reflect", "--quiver", "qsa3", "--sink", "2", "--q", "2", "S1",
                     "--checks", "generators"])
    assert code == 0 and "image:" in out
    code, out = run(["enumerate", "--quiver", "kronecker", "--q", "2", "--max-dim", "2",
                     "--format", "json"])
    assert code == 0 and len(json.loads(out)["isoclasses"]) == 9  # zero, 2 simples, 2 squares, 4 of dim (1,1)
