import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from qexp.formats import parse_equation_file  # noqa: E402
from qexp.groups import CyclicGroup, FreeGroup  # noqa: E402
from qexp.words import FreeProduct, Relator  # noqa: E402


@pytest.fixture
def examples_dir() -> Path:
    return ROOT / "examples_data"


@pytest.fixture
def ab_product() -> FreeProduct:
    """Z * Z on generators a and b."""
    return FreeProduct([CyclicGroup("A", 0, "a"), CyclicGroup("B", 0, "b")])


@pytest.fixture
def exx_product() -> FreeProduct:
    return FreeProduct([
        FreeGroup("H1", {"c11": 3, "c12": 3}),
        FreeGroup("H2", {"c21": 2, "c22": 2}),
    ])


@pytest.fixture
def exx_relator(exx_product) -> Relator:
    s = exx_product.parse_word("H1:c11.H2:c22*c21.H1:c12.H2:c22*c21")
    return Relator(s, 1)


@pytest.fixture
def exx_equation(examples_dir):
    _, W = parse_equation_file(examples_dir / "exx_eqn.qeq")
    return W


@pytest.fixture
def exx_z(examples_dir):
    _, W = parse_equation_file(examples_dir / "exx_z.qeq")
    return W
