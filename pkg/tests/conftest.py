import pytest

from metafib import kernels
from metafib.presets import get_preset
from metafib.recurrence import eval_single


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    kernels.warm_up()


@pytest.fixture(scope="session")
def vc_buffer():
    """Shared 6M-term buffer for the chaotic start <3,4,5,4,5,6>."""
    preset = get_preset("Vc")
    buf, outcome = eval_single(preset.spec, preset.ic, 6_000_000)
    assert outcome.alive
    return buf


@pytest.fixture(scope="session")
def v1111_buffer():
    """Shared 1M-term buffer for the slow solution from <1,1,1,1>."""
    preset = get_preset("V")
    buf, outcome = eval_single(preset.spec, preset.ic, 1_000_000)
    assert outcome.alive
    return buf
