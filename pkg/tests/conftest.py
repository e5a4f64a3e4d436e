import pytest
from hypothesis import HealthCheck, settings

from app.algebra.barcomplex import truncated_algebra
from app.algebra.parser import parse_polynomial
from app.algebra.polycore import QuotientAlgebra

settings.register_profile(
    "ci",
    derandomize=True,
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")

XY = ("x", "y")


def plane_curve(text: str) -> QuotientAlgebra:
    return QuotientAlgebra(XY, [parse_polynomial(text, XY)])


@pytest.fixture
def cusp() -> QuotientAlgebra:
    return plane_curve("y^2 - x^3")


@pytest.fixture
def node() -> QuotientAlgebra:
    return plane_curve("y^2 - x^2")


@pytest.fixture
def conic() -> QuotientAlgebra:
    return plane_curve("y^2 - x^2 - 1")


@pytest.fixture
def truncated():
    """Factory for Q[z]/(z^n)."""
    return truncated_algebra


@pytest.fixture
def xy():
    """Polynomial constructor over (x, y)."""
    return lambda text: parse_polynomial(text, XY)
