"""One test per acceptance criterion, each printing a single PASS/FAIL line.

Every check is exact: Fractions and integer matrices only.  The suites live
in polyhom.verify so the CLI runs the same code.
"""

from polyhom.verify import SUITES, run_suite


def _criterion(capsys, name):
    res = run_suite(name)
    number, title, _ = SUITES[name]
    with capsys.disabled():
        print(f"\n[criterion {number:02d}] {res.line()} ({title})")
        for note in res.notes:
            print(f"    note: {note}")
    assert res.passed, "\n".join(res.failures)


def test_01_functoriality(capsys):
    _criterion(capsys, "functoriality")


def test_02_weight_consistency(capsys):
    _criterion(capsys, "weights")


def test_03_associativity(capsys):
    _criterion(capsys, "associativity")


def test_04_scalar_identity(capsys):
    _criterion(capsys, "scalar-identity")


def test_05_partial_isometry(capsys):
    _criterion(capsys, "partial-isometry")


def test_06_angle_spectrum(capsys):
    _criterion(capsys, "angle")


def test_07_decomposition(capsys):
    _criterion(capsys, "decomposition")


def test_08_indicator(capsys):
    _criterion(capsys, "indicator")


def test_09_fp_composition_oracle(capsys):
    _criterion(capsys, "fp-oracle")


def test_10_theta_identities(capsys):
    _criterion(capsys, "theta")


def test_11_sandwich_stabilization(capsys):
    _criterion(capsys, "sandwich")


def test_12_chi_invariant(capsys):
    _criterion(capsys, "chi")


def test_13_finitary_realization(capsys):
    _criterion(capsys, "realization")


def test_14_lambda_closure(capsys):
    _criterion(capsys, "lambda")


def test_every_criterion_has_a_test():
    numbers = sorted(n for n, _, _ in SUITES.values())
    assert numbers == list(range(1, 15))
    tested = {name[5:7] for name in globals() if name.startswith("test_") and name[5:7].isdigit()}
    assert tested == {f"{n:02d}" for n in numbers}
