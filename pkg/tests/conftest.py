import pytest
from hypothesis import settings

from extremal.grp import Cyclic, Dihedral, DirectProduct, Free, FreeAbelian, Symmetric, make_group

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def C4():
    return make_group(Cyclic(4))


@pytest.fixture
def C6():
    return make_group(Cyclic(6))


@pytest.fixture
def S3():
    return make_group(Symmetric(3))


@pytest.fixture
def Z():
    return make_group(FreeAbelian(1))


@pytest.fixture
def Z2():
    return make_group(FreeAbelian(2))


@pytest.fixture
def F2():
    return make_group(Free(2))


SMALL_FINITE = [Cyclic(1), Cyclic(2), Cyclic(5), Cyclic(6), Symmetric(3), Dihedral(4),
                DirectProduct((Cyclic(2), Cyclic(3))), DirectProduct((Cyclic(2), Symmetric(3)))]


# acceptance criterion -> [ok, details]; filled by test_acceptance, printed at the end of the run
ACCEPTANCE = {}


def record_criterion(number, ok, detail):
    entry = ACCEPTANCE.setdefault(number, [True, []])
    entry[0] = entry[0] and ok
    entry[1].append(detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, details = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {'; '.join(details)}")
