import pytest

from iterk import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile the jit kernels once so timed tests measure the computation,
    # not compilation
    _kernels.warmup()
