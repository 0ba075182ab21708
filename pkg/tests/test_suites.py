import pytest

from quartic.core.errors import DimensionError
from quartic.suites import ALL, Suite, SuiteContext, SuiteError, SuiteRunner, Tally

FAST = ["lemma5", "prop3", "contraction"]


class BrokenSuite(Suite):
    @property
    def name(self) -> str:
        return "broken"

    @property
    def description(self) -> str:
        return "Raises on its first check."

    def check(self, ctx: SuiteContext, tally: Tally) -> None:
        tally.record("before", 0.0)
        raise DimensionError("bad shape")


class EmptySuite(Suite):
    @property
    def name(self) -> str:
        return "empty"

    @property
    def description(self) -> str:
        return "Runs nothing."

    def check(self, ctx: SuiteContext, tally: Tally) -> None:
        pass


@pytest.fixture
def ctx() -> SuiteContext:
    return SuiteContext(seed=3, samples=30)


@pytest.fixture
def fast_runner() -> SuiteRunner:
    runner = SuiteRunner()
    runner.suites = {name: runner.suites[name] for name in FAST}
    return runner


def test_tally_tracks_worst_violation():
    tally = Tally(tol=1e-9)
    tally.record("a", 1e-12)
    tally.record("a", 5e-13)
    tally.require("b", True)
    assert tally.checks_run == 3
    assert tally.max_violation == 1e-12
    assert tally.details["a.max_violation"] == 1e-12
    assert not tally.failures

    tally.record("c", float("nan"))
    tally.require("d", False)
    assert tally.failures == ["c", "d"]
    assert tally.max_violation == float("inf")


def test_registry_order():
    assert SuiteRunner().names == [
        "duality",
        "lemma1",
        "lemma3",
        "lemma5",
        "prop3",
        "prop4",
        "contraction",
        "roundtrip",
        "entropy",
        "membership",
        "witnesses",
    ]


def test_unknown_suite():
    with pytest.raises(SuiteError, match="Available"):
        SuiteRunner().resolve("lemma9")


def test_all_expands_to_registry():
    runner = SuiteRunner()
    assert [s.name for s in runner.resolve(ALL)] == runner.names


def test_schema():
    schema = SuiteRunner().suites["prop3"].to_schema()
    assert schema["name"] == "prop3"
    assert schema["description"]


@pytest.mark.parametrize("name", FAST + ["roundtrip"])
def test_fast_suites_pass(name, ctx):
    [result] = SuiteRunner().run(name, ctx)
    assert result.suite_name == name
    assert result.error is None
    assert result.checks_run > 0
    assert result.max_violation <= result.tolerance
    assert result.passed
    assert result.seed == 3


def test_results_are_deterministic(ctx):
    runner = SuiteRunner()
    first = runner.run("prop4", ctx)[0]
    second = runner.run("prop4", ctx)[0]
    assert first.max_violation == second.max_violation
    assert first.details == second.details


def test_parallel_run_keeps_registry_order(fast_runner, ctx):
    sequential = fast_runner.run(ALL, ctx)
    parallel = fast_runner.run(ALL, ctx, workers=2)
    assert [r.suite_name for r in parallel] == FAST
    assert [r.max_violation for r in parallel] == [r.max_violation for r in sequential]


def test_core_errors_fail_the_suite(ctx):
    result = BrokenSuite().execute(ctx)
    assert not result.passed
    assert result.error == "DimensionError: bad shape"
    assert result.checks_run == 1


def test_suite_without_checks_fails(ctx):
    result = EmptySuite().execute(ctx)
    assert result.checks_run == 0
    assert not result.passed


def test_dimension_override(ctx):
    narrowed = ctx.model_copy(update={"dims": [2]})
    [result] = SuiteRunner().run("prop3", narrowed)
    assert result.passed
    assert set(k for k in result.details if k.startswith("decoherence")) == {
        "decoherence.n2.max_violation"
    }


def test_roundtrip_jamiolkowski_inverse_is_exact(ctx):
    [result] = SuiteRunner().run("roundtrip", ctx)
    assert result.details["jamiolkowski.inverse.max_violation"] == 0.0


def test_duality_suite_covers_simplex_and_schur_concavity(ctx):
    [result] = SuiteRunner().run("duality", ctx)
    assert result.passed
    assert result.details["dual_float.simplex3.max_violation"] == 0.0
    assert result.details["schur.majorized.max_violation"] == 0.0
    assert result.details["schur.entropy.max_violation"] <= result.tolerance
