import hypothesis
import pytest

from steinberg.coset_module import ModuleContext
from steinberg.fields import make_tower

hypothesis.settings.register_profile("ci", max_examples=50, deadline=None)
hypothesis.settings.load_profile("ci")


@pytest.fixture(scope="session")
def tower3():
    return make_tower(3, 1)


@pytest.fixture(scope="session")
def tower2():
    return make_tower(2, 1)


@pytest.fixture(scope="session")
def ctx_sl2_f3_ell2(tower3):
    return ModuleContext(tower3, 2, 2)


@pytest.fixture(scope="session")
def ctx_sl2_f3_ell5(tower3):
    return ModuleContext(tower3, 2, 5)


@pytest.fixture(scope="session")
def ctx_sl3_f2_ell3(tower2):
    return ModuleContext(tower2, 3, 3)
