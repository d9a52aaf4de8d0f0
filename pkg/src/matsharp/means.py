"""The t-geometric mean and the composite matrix expressions on each side
of the inequalities under test.

The mean ``A #_t B = A^(1/2) (A^(-1/2) B A^(-1/2))^t A^(1/2)`` is the
Riemannian geodesic between positive definite A and B at parameter t.
It requires invertible inputs; a regularized surrogate is provided for
positive semidefinite stress tests.
"""

import numpy as np

from .errors import ConvergenceError, EmptySumError, NotPositiveDefiniteError, ShapeError
from .linalg import (
    hermitian_eigendecompose,
    hermitian_part,
    spectral_norm,
    spectrum_power,
)

# Default scale for the PSD regularization epsilon.
DEFAULT_EPSILON_SCALE = 1e-10

# Campaign grids: endpoints, the proven r >= 1 region, and the unproven
# r < 1 region for exploration.
DEFAULT_T_GRID = (0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0)
DEFAULT_R_GRID = (0.5, 1.0, 1.5, 2.0, 3.0)
DEFAULT_S_GRID = (0.5, 1.0, 2.0)


def _check_weight(t):
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"mean weight t must lie in [0, 1], got {t!r}")


def geometric_mean(a, b, t):
    """t-geometric mean of two strictly positive definite matrices.

    Parameters
    ----------
    a, b : array_like
        Hermitian strictly positive definite matrices of equal dimension.
    t : float
        Interpolation weight in [0, 1]; weight t sits on ``b``.

    Returns
    -------
    ndarray
        ``A^(1/2) (A^(-1/2) B A^(-1/2))^t A^(1/2)``, Hermitian positive
        definite.

    Raises
    ------
    NotPositiveDefiniteError
        If either input is singular or indefinite; use
        :func:`psd_geometric_mean` for PSD inputs.
    """
    _check_weight(t)
    sa = hermitian_eigendecompose(a, check=False)
    sb = hermitian_eigendecompose(b, check=False)
    if sa.dim != sb.dim:
        raise ShapeError(f"shape error: dimensions {sa.dim} vs {sb.dim}")
    for name, s in (("A", sa), ("B", sb)):
        if float(s.eigenvalues[-1]) <= 0.0:
            raise NotPositiveDefiniteError(
                "mean requires strictly positive definite inputs: "
                f"{name} has min eigenvalue {float(s.eigenvalues[-1]):.3e}"
            )
    return _mean_from_spectra(sa, sb, t)


def _mean_from_spectra(sa, sb, t):
    # The inner matrix A^(-1/2) B A^(-1/2) equals K K* with
    # K = A^(-1/2) B^(1/2), so its spectral data comes from an SVD of K.
    # That halves the exponent range the solver must resolve and yields
    # the mean as an exactly positive product M M*, which preserves
    # epsilon-level eigenvalues of regularized means that the sandwiched
    # form loses to rounding.
    k = sa.assemble(spectrum_power(sa, -0.5)) @ sb.assemble(spectrum_power(sb, 0.5))
    try:
        u, s, _ = np.linalg.svd(k)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolver did not converge: {exc}") from exc
    m = sa.assemble(spectrum_power(sa, 0.5)) @ (u * np.power(s, t))
    return hermitian_part(m @ m.conj().T, require=False)


def regularization_epsilon(a, b, epsilon_scale=DEFAULT_EPSILON_SCALE):
    """Epsilon used by the regularized mean: scale * (1 + max spectral norm)."""
    return float(epsilon_scale) * (1.0 + max(spectral_norm(a), spectral_norm(b)))


def psd_geometric_mean(a, b, t, epsilon_scale=DEFAULT_EPSILON_SCALE):
    """Regularized t-geometric mean for positive semidefinite inputs.

    Computes ``geometric_mean(A + eps*I, B + eps*I, t)`` with
    ``eps = epsilon_scale * (1 + max(||A||_2, ||B||_2))``.  This is a
    regularized surrogate for singular inputs, not a limit claim; report
    the epsilon alongside any result derived from it
    (:func:`regularization_epsilon` recomputes it).
    """
    if epsilon_scale <= 0.0:
        raise ValueError(f"epsilon_scale must be positive, got {epsilon_scale!r}")
    eps = regularization_epsilon(a, b, epsilon_scale)
    eye = np.eye(np.asarray(a).shape[0])
    return geometric_mean(np.asarray(a) + eps * eye, np.asarray(b) + eps * eye, t)


def sum_matrices(mats):
    """Entrywise sum of a nonempty list of Hermitian matrices."""
    mats = list(mats)
    if not mats:
        raise EmptySumError("empty sum: at least one matrix is required")
    first = np.asarray(mats[0])
    total = np.zeros_like(first, dtype=np.complex128)
    for m in mats:
        m = np.asarray(m)
        if m.shape != first.shape:
            raise ShapeError(f"shape error: cannot sum {first.shape} and {m.shape}")
        total = total + m
    return hermitian_part(total)


def _pair_means(a_list, b_list, t, epsilon_scale=None):
    a_list, b_list = list(a_list), list(b_list)
    if len(a_list) != len(b_list) or not a_list:
        raise ShapeError("shape error: A-list and B-list must be nonempty and of equal length")
    if epsilon_scale is None:
        return [geometric_mean(a, b, t) for a, b in zip(a_list, b_list)]
    return [psd_geometric_mean(a, b, t, epsilon_scale) for a, b in zip(a_list, b_list)]


def lhs_main(a_list, b_list, t, r, epsilon_scale=None):
    """Left side of the main inequality: sum over i of (A_i #_t B_i)^r.

    With ``epsilon_scale`` set, each pairwise mean goes through the
    regularized PSD path.
    """
    terms = []
    for mean in _pair_means(a_list, b_list, t, epsilon_scale):
        s = hermitian_eigendecompose(mean, check=False)
        terms.append(s.assemble(spectrum_power(s, r)))
    return sum_matrices(terms)


def _sum_power(mats, p):
    s = hermitian_eigendecompose(sum_matrices(mats), check=False)
    return s.assemble(spectrum_power(s, p))


def mid_main(a_list, b_list, r):
    """Middle term: (sum A)^(r/4) (sum B)^(r/2) (sum A)^(r/4), Hermitian PSD."""
    sa_q = _sum_power(a_list, r / 4.0)
    sb_h = _sum_power(b_list, r / 2.0)
    return hermitian_part(sa_q @ sb_h @ sa_q, require=False)


def rhs_main(a_list, b_list, r):
    """Right term: (sum A)^(r/2) (sum B)^(r/2); non-Hermitian in general."""
    return _sum_power(a_list, r / 2.0) @ _sum_power(b_list, r / 2.0)
