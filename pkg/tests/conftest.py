import pytest

from gapforge.params import SieveParams


def toy_params(x=20, M=1, a=0, y=3, z=5, U=17):
    return SieveParams(
        x=x, M=M, a=a, epsilon=0.1, C_U=2.0, y=y, z=z, U=U,
        w=0.0, z0=0.0, overrides_used=True,
    )


@pytest.fixture
def t1_params():
    return toy_params()


@pytest.fixture
def t2_params():
    return toy_params(M=3, a=1, U=13)
