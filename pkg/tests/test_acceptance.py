"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Every assertion is exact (zero tolerance); run with ``pytest -v`` or
``pytest -s tests/test_acceptance.py`` to see the per-criterion lines.
"""

import random
import time
from contextlib import contextmanager
from fractions import Fraction

from helpers import CHSH_SPACES, random_local_model, random_ns_behavior
from oracle import extremal_generator_tables, oracle_local_content
from hvlab.bell import chsh, evaluate, local_bound, ns_bound
from hvlab.boxes import (
    Behavior,
    LabelSet,
    check_product,
    is_no_signalling,
    validate_behavior,
)
from hvlab.catalog import appendix_a_model, pr_box, signalling_box, table1_box
from hvlab.cli import main
from hvlab.decompose import (
    content_lp_problem,
    decomposition_to_model,
    enumerate_local_vertices,
    max_local_content,
    verify_decomposition,
)
from hvlab.errors import HvlabError
from hvlab.formats import save_box
from hvlab.hvmodel import (
    ExtendedModel,
    HiddenVariableModel,
    WExtension,
    check_locality,
    check_triviality,
    first_mover_joint,
    guessing_probability,
    marginalize_nonlocal,
    nontrivial_weight,
    reconstruct,
    uniform_distribution,
)
from hvlab.scalar import HALF, ONE, ZERO, Scalar, format_scalar, parse_scalar
from hvlab.simplex import check_certificate

SA, SB, OX, OY = CHSH_SPACES
ALPHA = parse_scalar("1/4-1/8*sqrt2")


@contextmanager
def criterion(number: int, description: str):
    try:
        yield
    except BaseException:
        print(f"criterion {number:02d} FAIL: {description}")
        raise
    print(f"criterion {number:02d} PASS: {description}")


def test_criterion_01_reconstruction():
    with criterion(1, "model reconstruction equals the target box cell-for-cell"):
        rebuilt = reconstruct(appendix_a_model())
        target = table1_box()
        assert rebuilt.spaces == target.spaces
        for (cell, got), want in zip(rebuilt.cells(), target.table):
            assert got == want, cell


def test_criterion_02_locality_and_nontriviality():
    with criterion(2, "locality holds, triviality fails, nontrivial weight is 1-(1/2)sqrt2"):
        model = appendix_a_model()
        assert check_locality(model) == (True, None)
        trivial, witness = check_triviality(model)
        assert not trivial and witness is not None
        assert nontrivial_weight(model) == parse_scalar("1-1/2*sqrt2")
        assert nontrivial_weight(model) == 4 * ALPHA


def test_criterion_03_guessing_probability():
    with criterion(3, "guessing probability is 1-(1/4)sqrt2 for every side and setting"):
        model = appendix_a_model()
        expected = parse_scalar("1-1/4*sqrt2")
        assert expected == HALF + 2 * ALPHA
        for setting in SA:
            assert guessing_probability(model, "alice", setting) == expected
        for setting in SB:
            assert guessing_probability(model, "bob", setting) == expected


def test_criterion_04_chsh_sandwich():
    with criterion(4, "CHSH: value 2*sqrt2, local bound 2 over 16 strategies, LP bound 4, exact order"):
        expression = chsh()
        value = evaluate(expression, table1_box())
        assert value == parse_scalar("2*sqrt2")
        n_strategies = len(OX) ** len(SA) * len(OY) ** len(SB)
        assert n_strategies == 16
        bound, strategy = local_bound(expression)
        assert bound == parse_scalar("2")
        assert evaluate(expression, strategy.to_behavior(expression.spaces)) == bound
        ns_value = ns_bound(expression)
        assert ns_value == parse_scalar("4")
        assert (bound - value).sign() < 0
        assert (value - ns_value).sign() < 0


def test_criterion_05_lp_decomposition():
    with criterion(5, "max local content: 2-sqrt2 for the target box (certified, < 5 s), 0 for the extremal box"):
        box = table1_box()
        start = time.perf_counter()
        decomposition = max_local_content(box)
        elapsed = time.perf_counter() - start
        assert elapsed < 5.0, f"LP took {elapsed:.2f}s"
        assert decomposition.local_content == parse_scalar("2-1*sqrt2")
        # analytic cross-check: every deterministic vertex consumes at
        # least one of the eight alpha-cells, so the content is at most
        # 8*alpha, which equals the LP optimum
        small_cells = [i for i, value in enumerate(box.table) if value == ALPHA]
        assert len(small_cells) == 8
        for vertex in enumerate_local_vertices(box.spaces):
            assert any(vertex.table[i] == ONE for i in small_cells)
        assert (decomposition.local_content - 8 * ALPHA).sign() <= 0
        assert decomposition.local_content == 8 * ALPHA
        problem = content_lp_problem(box, enumerate_local_vertices(box.spaces))
        assert check_certificate(problem, decomposition.certificate)
        report = verify_decomposition(decomposition, box)
        assert report.ok, report.summary()
        assert max_local_content(pr_box()).local_content == ZERO


def test_criterion_06_decomposition_to_model_round_trip():
    with criterion(6, "decomposition model is local, has nontrivial weight 2-sqrt2, reconstructs the box"):
        box = table1_box()
        model = decomposition_to_model(max_local_content(box))
        assert check_locality(model) == (True, None)
        assert nontrivial_weight(model) == parse_scalar("2-1*sqrt2")
        assert reconstruct(model) == box


def test_criterion_07_signalling_box_and_closure(tmp_path):
    with criterion(7, "signalling box: witness, decompose exit 1, and 200-model no-signalling closure"):
        box = signalling_box()
        ok, witness = is_no_signalling(box)
        assert not ok and witness is not None
        assert witness.value_reference != witness.value_other
        assert witness.side in ("alice", "bob")
        path = tmp_path / "signalling.box.json"
        save_box(box, path)
        assert main(["decompose", str(path)]) == 1
        rng = random.Random(50403)
        small = (LabelSet(("a0", "a1")), LabelSet(("b0", "b1", "b2")), LabelSet(("0", "1")), LabelSet(("0", "1")))
        for trial in range(200):
            spaces = CHSH_SPACES if trial % 2 == 0 else small
            model = random_local_model(rng, spaces, n_pairs=1 + trial % 3)
            assert check_locality(model)[0]
            assert is_no_signalling(reconstruct(model))[0]


def test_criterion_08_freedom_of_choice_link():
    with criterion(8, "first-mover joint: product for the local model, witness for a signalling kernel"):
        model = appendix_a_model()
        joint = first_mover_joint(model, uniform_distribution(SA), uniform_distribution(SB))
        ok, _ = check_product(joint, ("B",), ("X", "A", "U", "V"))
        assert ok
        signalling_kernel = Behavior.from_function(
            SA,
            SB,
            OX,
            OY,
            lambda a, b, x, y: ONE if (x == ("+1" if b == "1" else "-1") and y == "+1") else ZERO,
        )
        bad_model = HiddenVariableModel(
            (("good", "good"), ("bad", "bad")),
            (HALF, HALF),
            (pr_box(), signalling_kernel),
        )
        joint = first_mover_joint(bad_model, uniform_distribution(SA), uniform_distribution(SB))
        ok, witness = check_product(joint, ("B",), ("X", "A", "U", "V"))
        assert not ok and witness is not None
        assert witness.joint_value != witness.left_value * witness.right_value


def test_criterion_09_nonlocal_marginalization():
    with criterion(9, "setting-dependent signalling branches average to the extremal box, model is local"):

        def sign(a: str, b: str) -> int:
            return -1 if (a, b) == ("0", "3") else 1

        def branch(which: int) -> Behavior:
            def cell(a, b, x, y):
                xv = "+1" if which == 0 else "-1"
                s = sign(a, b) if which == 0 else -sign(a, b)
                yv = "+1" if s > 0 else "-1"
                return ONE if (x == xv and y == yv) else ZERO

            return Behavior.from_function(SA, SB, OX, OY, cell)

        branches = (branch(0), branch(1))
        for kernel in branches:
            assert validate_behavior(kernel).ok
            assert not is_no_signalling(kernel)[0]  # each branch signals
        extended = ExtendedModel(
            (("0", "0"),),
            (ONE,),
            (WExtension(LabelSet(("0", "1")), (HALF, HALF), branches),),
        )
        model = marginalize_nonlocal(extended)
        assert model.kernels[0] == pr_box()
        assert check_locality(model) == (True, None)


def _random_small_rational_ns_box(rng: random.Random) -> Behavior:
    base = random_ns_behavior(rng, CHSH_SPACES, components=3)
    extremal = extremal_generator_tables()[rng.randrange(8)]
    weight = Fraction(rng.randint(0, 6), 8)
    table = tuple(
        Scalar(weight * e + (1 - weight) * cell.a) for e, cell in zip(extremal, base.table)
    )
    return Behavior(SA, SB, OX, OY, table)


def test_criterion_10_oracle_equivalence():
    with criterion(10, "LP content equals the independent basic-solution oracle on 50 random boxes"):
        rng = random.Random(161803)
        for trial in range(50):
            box = _random_small_rational_ns_box(rng)
            assert validate_behavior(box).ok
            assert is_no_signalling(box)[0]
            decomposition = max_local_content(box)
            lp_value = decomposition.local_content
            assert lp_value.b == 0, "rational data must give rational content"
            oracle_value = oracle_local_content(tuple(cell.a for cell in box.table))
            assert lp_value.a == oracle_value, f"trial {trial}: {lp_value.a} != {oracle_value}"


def test_criterion_11_robustness_and_round_trips(tmp_path):
    with criterion(11, "fuzzed parsers exit 2 without crashing; catalog round trips are canonical"):
        rng = random.Random(271828)
        # scalar parser: any outcome other than success must be a typed error
        alphabet = "0123456789/*+-sqrt2 e.|"
        for _ in range(300):
            text = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 12)))
            try:
                value = parse_scalar(text)
            except HvlabError:
                pass
            else:
                assert format_scalar(value)
        # box/model loading through the CLI: fuzzed files exit 2
        samples = [b"", b"{", b"[1,2]", b'{"p": {}}', b'{"pairs": 3}', b"\x00\x01\x02"]
        for _ in range(20):
            samples.append(bytes(rng.randrange(256) for _ in range(rng.randrange(1, 60))))
        for i, blob in enumerate(samples):
            path = tmp_path / f"fuzz{i}.json"
            path.write_bytes(blob)
            assert main(["check", str(path)]) == 2
            assert main(["decompose", str(path)]) == 2
        # canonical round trip on every catalog entry
        from hvlab.catalog import entries
        from hvlab.formats import (
            behavior_from_dict,
            behavior_to_dict,
            expression_from_dict,
            expression_to_dict,
            model_from_dict,
            model_to_dict,
        )

        for entry in entries().values():
            if entry.kind == "scalar":
                assert parse_scalar(format_scalar(entry.value)) == entry.value
            elif entry.kind == "behavior":
                assert behavior_from_dict(behavior_to_dict(entry.value)) == entry.value
            elif entry.kind == "model":
                assert model_from_dict(model_to_dict(entry.value)) == entry.value
            else:
                assert expression_from_dict(expression_to_dict(entry.value)) == entry.value
