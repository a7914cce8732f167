"""Command-line interface: the expression grammar, print/parse round-trips,
frozen command outputs, JSON payload shapes, and exit codes."""

import contextlib
import io
import json
import random
from fractions import Fraction

import pytest

from qmodular import identities
from qmodular.cli import main, parse_expr
from qmodular.errors import ParseError
from qmodular.expr import (
    DeltaRef,
    EisensteinAtom,
    EtaAtom,
    GeneratorRef,
    HalfTwist,
    PhiAtom,
    Power,
    Product,
    Scalar,
    Sum,
    WpAtom,
    WptAtom,
    print_expr,
    weight,
)
from qmodular.eta import EtaQuotient
from qmodular.identities import IdentityCase
from qmodular.qseries import HALF


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def test_parse_basic_atoms():
    assert parse_expr("E4") == EisensteinAtom(4)
    assert parse_expr("Eis(4,5)") == EisensteinAtom(4, 5)
    assert parse_expr("Delta(3)") == DeltaRef(3)
    assert parse_expr("E(4,10,2)") == GeneratorRef(10, 4, 2)
    assert parse_expr("wp(3/2,0,3)") == WpAtom(Fraction(3, 2), 0, 3)
    assert parse_expr("wpt(0,1/2,5)") == WptAtom(0, HALF, 5)
    assert parse_expr("eta(3)") == EtaAtom(EtaQuotient([(3, 1)]))
    assert parse_expr("Phi(7)") == PhiAtom(7)
    assert parse_expr("PhiDiv(7)") == PhiAtom(7, "divisor")
    assert parse_expr("twist(wpt(1/2,0,1))") == HalfTwist(WptAtom(HALF, 0, 1))


def test_parse_arithmetic_shapes():
    assert parse_expr("2^3") == Scalar(8)
    assert parse_expr("-E4") == Sum(((Fraction(-1), EisensteinAtom(4)),))
    assert parse_expr("3/7*E4 - 2*Delta(2)") == Sum(
        (
            (Fraction(3, 7), EisensteinAtom(4)),
            (Fraction(-2), DeltaRef(2)),
        )
    )
    assert parse_expr("(wp(1,0,2) + wp(1,0,3))^2") == Power(
        Sum(
            (
                (Fraction(1), WpAtom(1, 0, 2)),
                (Fraction(1), WpAtom(1, 0, 3)),
            )
        ),
        2,
    )
    assert parse_expr("Delta(2)*E4") == Product((DeltaRef(2), EisensteinAtom(4)))


def test_parse_errors_carry_positions():
    cases = {
        ")": 0,
        "E4 + ": 5,
        "E4 E6": 3,
        "1/0": 3,
        "wp(1,0": 6,
    }
    for src, pos in cases.items():
        with pytest.raises(ParseError) as exc:
            parse_expr(src)
        assert exc.value.position == pos, src


def test_parse_rejects_deep_torsion_offsets():
    with pytest.raises(ParseError):
        parse_expr("wp(1/3,0,3)")
    with pytest.raises(ParseError):
        parse_expr("wpt(0,1/4,5)")


# ---------------------------------------------------------------------------
# print/parse round-trips on random trees
# ---------------------------------------------------------------------------

ATOM_POOL = {
    2: [
        WpAtom(1, 0, 2),
        WpAtom(Fraction(3, 2), 0, 3),
        WpAtom(2, 0, 5),
        WptAtom(0, HALF, 5),
        WptAtom(1, 0, 2),
        GeneratorRef(10, 2, 1),
        PhiAtom(7),
        PhiAtom(3, "divisor"),
        HalfTwist(WptAtom(HALF, 0, 1)),
        DeltaRef(4),
        DeltaRef(9),
    ],
    4: [
        EisensteinAtom(4),
        EisensteinAtom(4, 5),
        DeltaRef(2),
        DeltaRef(10),
        GeneratorRef(10, 4, 3),
        GeneratorRef(5, 4, 1),
    ],
    6: [
        EisensteinAtom(6),
        DeltaRef(3),
        DeltaRef(7),
        GeneratorRef(7, 6, 3),
    ],
    12: [DeltaRef(1), EisensteinAtom(12)],
}


def random_tree(rng, w, depth):
    """A random expression of weight w drawn from parseable constructors."""
    choices = ["atom"]
    if depth > 0:
        choices += ["sum", "product", "power"]
    kind = rng.choice(choices)
    if kind == "power" and w in (4, 12):
        base = random_tree(rng, 2 if w == 4 else 6, depth - 1)
        return Power(base, w // weight(base)) if weight(base) else base
    if kind == "product" and w in (4, 6, 12):
        w1 = rng.choice([u for u in (2, 4, 6) if u < w and (w - u) in ATOM_POOL])
        return Product(
            (random_tree(rng, w1, depth - 1), random_tree(rng, w - w1, depth - 1))
        )
    if kind == "sum":
        n = rng.randint(2, 3)
        terms = []
        for _ in range(n):
            c = Fraction(rng.choice([x for x in range(-9, 10) if x]), rng.randint(1, 4))
            terms.append((c, random_tree(rng, w, depth - 1)))
        return Sum(tuple(terms))
    return rng.choice(ATOM_POOL[w])


def test_print_parse_round_trip_random_trees():
    rng = random.Random(2024)
    seen = set()
    for _ in range(200):
        w = rng.choice([2, 4, 6, 12])
        t = random_tree(rng, w, 3)
        s = print_expr(t)
        seen.add(s)
        back = parse_expr(s)
        assert print_expr(back) == s, s
        assert weight(back) == weight(t), s
    assert len(seen) > 100  # the generator really does vary


def test_structural_round_trip_on_plain_trees():
    # trees without scalar folding or single-term sums return identically
    rng = random.Random(77)
    for _ in range(60):
        t = random_tree(rng, rng.choice([2, 4]), 2)
        if isinstance(t, Scalar):
            continue
        assert parse_expr(print_expr(t)) == t, print_expr(t)


# ---------------------------------------------------------------------------
# frozen command outputs
# ---------------------------------------------------------------------------


def test_expand_command_frozen():
    code, out, err = run("expand", "--expr", "Phi(5)", "--prec", "5")
    assert code == 0 and err == ""
    assert out == "1 + 6q + 18q^2 + 24q^3 + 42q^4 + O(q^5)\n"


def test_dims_command_frozen():
    assert run("dims", "--level", "10", "--weight", "16") == (0, "25\n", "")
    code, out, _ = run("dims", "--level", "7")
    assert out == "N=7: 1 3 5 5 7 9 9 11\n"
    code, out, _ = run("dims")
    lines = out.splitlines()
    assert len(lines) == 10
    assert lines[0] == "N=1: 0 1 1 1 1 2 1 2"
    assert lines[9] == "N=10: 3 7 9 13 15 19 21 25"


def test_reduce_command_frozen():
    assert run("reduce", "--expr", "E4", "--level", "2", "--weight", "4") == (
        0,
        "1, 192\n",
        "",
    )
    code, out, _ = run(
        "reduce", "--expr", "wp(1,1/2,2)", "--level", "4", "--weight", "2"
    )
    assert code == 0 and out == "-1/3, 16/3\n"


def test_basis_command_frozen():
    code, out, _ = run("basis", "--level", "2", "--weight", "4", "--prec", "5")
    assert code == 0
    assert out == (
        "M_4(Gamma0(2)): dimension 2, precision 5\n"
        "[0] E(2,2,0)^2 = 1 + 48q + 624q^2 + 1344q^3 + 5232q^4 + O(q^5)\n"
        "[1] Delta(2) = q + 8q^2 + 28q^3 + 64q^4 + O(q^5)\n"
    )


def test_expand_half_grid_text():
    code, out, _ = run("expand", "--expr", "wpt(1/2,0,1)", "--prec", "3")
    assert code == 0
    assert out == "1 - 8q^(1/2) + 24q - 32q^(3/2) + 24q^2 - 48q^(5/2) + O(q^3)\n"


def test_verify_command():
    code, out, _ = run("verify", "--identity", "mod1", "--prec", "30")
    assert code == 0
    assert out == "mod1: PASS (below q^30)\n"
    code, out, _ = run("verify", "--prec", "10")
    assert code == 0
    assert len(out.splitlines()) == len(identities.names())


def test_bench_command():
    code, out, err = run("bench")
    assert code == 0
    assert out.splitlines()[0] == "E(4,10,2)*E(2,10,0)^335*Delta(10)^336"
    assert out.splitlines()[-1] == "verified"
    assert "q^2018" in out and "81359425707034726336q^2027" in out
    assert err.startswith("bench: expanded below q^2028 in")


# ---------------------------------------------------------------------------
# JSON payloads
# ---------------------------------------------------------------------------


def test_expand_json_half_grid():
    code, out, _ = run(
        "expand", "--expr", "wpt(1/2,0,1)", "--prec", "3", "--format", "json"
    )
    doc = json.loads(out)
    assert doc == {
        "expr": "wpt(1/2,0,1)",
        "weight": "2",
        "precision": "3",
        "terms": [
            ["0", "1"],
            ["1/2", "-8"],
            ["1", "24"],
            ["3/2", "-32"],
            ["2", "24"],
            ["5/2", "-48"],
        ],
    }


def test_reduce_json():
    code, out, _ = run(
        "reduce", "--expr", "E4", "--level", "2", "--weight", "4",
        "--format", "json",
    )
    doc = json.loads(out)
    assert doc == {
        "level": 2,
        "weight": 4,
        "coordinates": [["1", "1"], ["192", "1"]],
    }


def test_basis_json():
    code, out, _ = run(
        "basis", "--level", "2", "--weight", "4", "--prec", "4", "--format", "json"
    )
    doc = json.loads(out)
    assert doc["level"] == 2 and doc["weight"] == 4
    assert [el["label"] for el in doc["elements"]] == ["E(2,2,0)^2", "Delta(2)"]


def test_dims_json():
    code, out, _ = run("dims", "--level", "7", "--format", "json")
    doc = json.loads(out)
    assert doc == {
        "level": 7,
        "dims": {"2": 1, "4": 3, "6": 5, "8": 5, "10": 7, "12": 9, "14": 9, "16": 11},
    }


def test_verify_json():
    code, out, _ = run("verify", "--identity", "mod1", "--prec", "20",
                       "--format", "json")
    doc = json.loads(out)
    assert doc == [
        {"name": "mod1", "status": "pass", "prec": 20, "first_bad_exponent": None}
    ]


def test_dump_levels_json():
    code, out, _ = run("dump-levels")
    rows = json.loads(out)
    assert len(rows) == 10
    assert rows[1] == {"N": 2, "rho": 4, "nu": 1, "eta": [[1, -8], [2, 16]]}
    assert rows[9] == {
        "N": 10, "rho": 4, "nu": 6,
        "eta": [[1, 2], [2, -4], [5, -10], [10, 20]],
    }


def test_out_writes_file(tmp_path):
    target = tmp_path / "series.txt"
    code, out, _ = run("expand", "--expr", "E4", "--prec", "3", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text() == "1 + 240q + 2160q^2 + O(q^3)\n"


# ---------------------------------------------------------------------------
# exit codes
# ---------------------------------------------------------------------------


def test_exit_code_not_in_span():
    code, out, err = run(
        "reduce", "--expr", "wpt(1/2,0,1)", "--level", "2", "--weight", "2"
    )
    assert code == 1 and out == ""
    assert err == "error: not in span: first unmatched exponent 1/2\n"


def test_exit_code_weight_mismatch():
    code, _, err = run("expand", "--expr", "E(2,3,0) + Delta(2)", "--prec", "5")
    assert code == 2
    assert err == "error: sum mixes weights 2 and 4\n"


def test_exit_code_parse_error():
    code, _, err = run("expand", "--expr", "wp(1,0", "--prec", "4")
    assert code == 2
    assert "position 6" in err


def test_exit_code_domain_errors():
    code, _, err = run("expand", "--expr", "Delta(11)", "--prec", "4")
    assert code == 2 and "N=11" in err
    # parses, then fails in the torsion-value domain check
    code, _, err = run("expand", "--expr", "wp(1,2,3)", "--prec", "4")
    assert code == 2 and err.startswith("error:")


def test_exit_code_verify_failure(monkeypatch):
    g = GeneratorRef(2, 2, 0)
    case = IdentityCase(
        name="broken-for-test",
        lhs=g,
        rhs=Sum(((Fraction(2), g),)),
        note="deliberately false",
    )
    monkeypatch.setitem(identities.REGISTRY, "broken-for-test", case)
    code, out, _ = run("verify", "--identity", "broken-for-test", "--prec", "10")
    assert code == 1
    assert out.startswith("broken-for-test: FAIL at q^0")
    code, out, _ = run("verify", "--prec", "10")
    assert code == 1


def test_unknown_subcommand_exits_via_argparse():
    code, out, err = run("frobnicate")
    assert code == 2
