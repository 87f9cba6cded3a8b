import pytest

from ift_watershed.synthgen import random_markers, uniform_ints

VARIANTS = ("I", "II", "III", "IV", "V")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=VARIANTS)
def variant(request):
    return request.param


def random_case(seed: int, max_side: int = 8):
    """Seeded random volume + disjoint markers for property campaigns.

    Value ranges alternate between wide and very narrow so that plateaus
    (and hence FIFO tie-breaking) show up regularly.
    """
    from ift_watershed.volume import Volume

    r = uniform_ints(seed, 8, 0, 1 << 30).tolist()
    dims = tuple(1 + r[i] % max_side for i in range(3))
    n = dims[0] * dims[1] * dims[2]
    if n < 2:
        dims = (2, dims[1], dims[2])
        n *= 2
    high = (3, 8, 40, 255)[r[3] % 4]
    values = uniform_ints(seed ^ 0x5EED, n, 0, high)
    k = max(2, min(n, 1 + r[4] % 6))
    n_in = 1 + r[5] % (k - 1)
    markers = random_markers(dims, n_in, k - n_in, seed)
    return Volume(dims, values, 8), markers


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
