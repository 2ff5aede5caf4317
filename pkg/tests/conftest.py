import pytest

from tiltforge import build_algebra, detect_levels, folded_quiver, mckay_quiver, quadratic_dual
from tiltforge.fixtures import cyclic_4_1133, cyclic_5_122, kronecker_presentation


@pytest.fixture(scope="session")
def fix5():
    g, grading, e = cyclic_5_122()
    pres = mckay_quiver(g, grading)
    nabla = folded_quiver(pres, 2, g)
    return {"g": g, "grading": grading, "e": e, "pres": pres, "nabla": nabla}


@pytest.fixture(scope="session")
def fix5_tab(fix5):
    return build_algebra(fix5["nabla"])


@pytest.fixture(scope="session")
def fix4():
    g, grading, e = cyclic_4_1133()
    pres = mckay_quiver(g, grading)
    nabla = folded_quiver(pres, 2, g)
    return {"g": g, "grading": grading, "e": e, "pres": pres, "nabla": nabla}


@pytest.fixture(scope="session")
def fix4_tab(fix4):
    return build_algebra(fix4["nabla"])


@pytest.fixture(scope="session")
def fix4_levels(fix4):
    return detect_levels(fix4["nabla"])


@pytest.fixture(scope="session")
def fix4_dual(fix4):
    return quadratic_dual(fix4["nabla"])


@pytest.fixture(scope="session")
def fix4_dual_tab(fix4_dual):
    return build_algebra(fix4_dual)


@pytest.fixture(scope="session")
def kron_tab():
    return build_algebra(kronecker_presentation())
