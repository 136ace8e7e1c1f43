import math
from collections import Counter


def binomial_z(count: int, n: int, p: float) -> float:
    """Standardized deviation of a binomial count from its mean."""
    sd = math.sqrt(n * p * (1 - p))
    if sd == 0:
        return 0.0 if count == n * p else math.inf
    return abs(count - n * p) / sd


def frequencies(draw, n_draws: int) -> Counter:
    return Counter(draw() for _ in range(n_draws))


def assert_matches(freqs, probs: dict, n: int, z_max: float = 3.0):
    extra = set(freqs) - set(probs)
    assert not extra, f"unexpected outcomes {extra}"
    for key, p in probs.items():
        z = binomial_z(freqs.get(key, 0), n, p)
        assert z <= z_max, f"outcome {key}: count {freqs.get(key, 0)} vs expected {n * p:.1f} (z={z:.2f})"


# acceptance outcomes, printed in the terminal summary by conftest
ACCEPTANCE: list[tuple[str, bool, str]] = []


def record(criterion: str, ok: bool, detail: str) -> bool:
    ACCEPTANCE.append((criterion, bool(ok), detail))
    return ok
