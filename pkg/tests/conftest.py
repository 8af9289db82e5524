import numpy as np
import pytest


def random_operator(rng, d):
    return rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))


def random_density(rng, d):
    G = random_operator(rng, d)
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def random_grid(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def naive_whdo(d, k1, k2):
    """Displacement built from explicit loops, independent of the library."""
    Z = np.zeros((d, d), dtype=complex)
    X = np.zeros((d, d), dtype=complex)
    for j in range(d):
        Z[j, j] = np.exp(2j * np.pi * k2 * j / d)
        X[(j + k1) % d, j] = 1
    return np.exp(-2j * np.pi * k1 * k2 / (2 * d)) * Z @ X


def naive_parity(d):
    R = np.zeros((d, d))
    for j in range(d):
        R[(-j) % d, j] = 1
    return R


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def broken_stencil(d, violate, seed=0):
    """Valid sampled stencil modified in the Fourier domain to break exactly one criterion.

    Each edit scales whole cosets, so the grid stays projector-invariant.
    """
    from dwfstencil.stencil_kit import fourier_orbits, sample_fourier_grid, stencil_from_fourier

    B = sample_fourier_grid(d, seed)
    orbits = fourier_orbits(d)
    other = orbits[1]
    if violate == "m1":
        # rotate one coset only: breaks B(-m) = conj(B(m)), keeps |B| and B(0)
        for m in other["coset"].values():
            B[m] *= np.exp(0.7j)
    elif violate == "m2":
        for m in orbits[0]["coset"].values():
            B[m] *= -1
    elif violate == "m3":
        for m in set(other["coset"].values()) | set(other["neg_coset"].values()):
            B[m] *= 1.5
    else:
        raise ValueError(violate)
    return stencil_from_fourier(B, label=f"broken-{violate}")


ACCEPTANCE_RESULTS = {}


def record_criterion(number, title, ok, detail=""):
    ACCEPTANCE_RESULTS[number] = (title, bool(ok), detail)
    assert ok, f"criterion {number} ({title}) failed: {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        title, ok, detail = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}: {detail}")
