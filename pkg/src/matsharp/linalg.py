"""Dense complex matrix arithmetic, Hermitian eigendecomposition, and
spectral matrix functions.

All matrices are square ``numpy`` arrays of ``complex128``; real input is
promoted on entry.  Matrices are kept at desk scale (n up to a few dozen),
so accuracy and determinism are preferred over asymptotic speed.  Every
function is pure: identical input bits produce identical output bits.
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    HermitianDefectError,
    NotPositiveDefiniteError,
    ShapeError,
    SingularFunctionError,
)

# Relative tolerance for the Hermitian-defect and PSD-clamp invariants.
HERMITIAN_RTOL = 1e-12
PSD_CLAMP_RTOL = 1e-12
# Spectrum invariants: ||V*V - I||_F <= UNITARITY_RTOL * n and
# ||A - V diag(w) V*||_F <= RECONSTRUCTION_RTOL * (1 + ||A||_F).
UNITARITY_RTOL = 1e-12
RECONSTRUCTION_RTOL = 1e-12


def as_matrix(entries):
    """Validate and normalize input to a square complex128 matrix.

    Parameters
    ----------
    entries : array_like
        Square matrix data; real or complex.

    Returns
    -------
    ndarray of shape (n, n), complex128

    Raises
    ------
    ShapeError
        If the data is not a square matrix with n >= 1.
    ValueError
        If any entry is NaN or infinite.
    """
    a = np.asarray(entries)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ShapeError(f"shape error: expected a square matrix, got shape {a.shape}")
    a = a.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return a


def adjoint(a):
    """Conjugate transpose of ``a``."""
    return as_matrix(a).conj().T


def matmul(a, b):
    """Matrix product with explicit conformance check."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ShapeError(f"shape error: cannot multiply {a.shape} by {b.shape}")
    return a @ b


def add(a, b):
    """Entrywise sum with explicit conformance check."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ShapeError(f"shape error: cannot add {a.shape} and {b.shape}")
    return a + b


def frobenius_norm(a):
    """Frobenius norm of a matrix."""
    return float(np.linalg.norm(a))


def hermitian_defect(a):
    """Frobenius norm of A - A*, the distance from being Hermitian."""
    a = as_matrix(a)
    return float(np.linalg.norm(a - a.conj().T))


def hermitian_part(a, require=True):
    """Symmetrize a matrix to (A + A*)/2.

    Parameters
    ----------
    a : array_like
        Square matrix, expected to be Hermitian up to rounding.
    require : bool
        When True, raise if the defect exceeds
        ``HERMITIAN_RTOL * (1 + ||A||_F)`` instead of symmetrizing silently.

    Returns
    -------
    ndarray
        Exactly Hermitian matrix (equal to its own conjugate transpose).
    """
    a = as_matrix(a)
    if require:
        defect = float(np.linalg.norm(a - a.conj().T))
        if defect > HERMITIAN_RTOL * (1.0 + float(np.linalg.norm(a))):
            raise HermitianDefectError(
                f"matrix is not Hermitian: defect {defect:.3e} exceeds tolerance"
            )
    return 0.5 * (a + a.conj().T)


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    Attributes
    ----------
    eigenvalues : ndarray of shape (n,)
        Real eigenvalues, sorted nonincreasing.
    vectors : ndarray of shape (n, n)
        Columns are the matching orthonormal eigenvectors.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self):
        return self.eigenvalues.shape[0]

    def assemble(self, values):
        """Rebuild V diag(values) V* as an exactly Hermitian matrix."""
        values = np.asarray(values, dtype=np.float64)
        m = (self.vectors * values) @ self.vectors.conj().T
        return 0.5 * (m + m.conj().T)

    def apply(self, f):
        """Spectral application of a scalar function: V diag(f(w)) V*."""
        return self.assemble([f(x) for x in self.eigenvalues])


def _eigh(a):
    """Eigendecomposition without the invariant re-check (internal hot path)."""
    h = 0.5 * (a + a.conj().T)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolver did not converge: {exc}") from exc
    # Stable descending order keeps degenerate eigenspaces in LAPACK's
    # column order (the identity decomposes to identity vectors).
    order = np.argsort(-w, kind="stable")
    return Spectrum(w[order], v[:, order])


def hermitian_eigendecompose(a, check=True):
    """Eigendecompose a Hermitian matrix.

    Parameters
    ----------
    a : array_like
        Hermitian matrix (validated; symmetrized via (A + A*)/2).
    check : bool
        When True, verify the unitarity and reconstruction invariants of
        the result and raise ConvergenceError carrying the residual if
        either fails.

    Returns
    -------
    Spectrum
        Eigenvalues sorted nonincreasing with orthonormal eigenvectors.
        Deterministic: identical input bits give identical output bits.
    """
    h = hermitian_part(a)
    spec = _eigh(h)
    if check:
        n = spec.dim
        v = spec.vectors
        unit = float(np.linalg.norm(v.conj().T @ v - np.eye(n)))
        recon = float(np.linalg.norm(h - spec.assemble(spec.eigenvalues)))
        scale = 1.0 + float(np.linalg.norm(h))
        if unit > UNITARITY_RTOL * n or recon > RECONSTRUCTION_RTOL * scale:
            raise ConvergenceError(
                "eigensolver did not converge: reconstruction residual "
                f"{recon:.3e}, unitarity defect {unit:.3e}"
            )
    return spec


def clamp_psd_eigenvalues(w, strict=False):
    """Clamp tiny negative eigenvalues of a PSD matrix to zero.

    Values in ``[-tol, 0)`` with ``tol = PSD_CLAMP_RTOL * (1 + max|w|)``
    are rounded up to 0; anything more negative raises.  With ``strict``,
    any nonpositive eigenvalue raises instead.
    """
    w = np.asarray(w, dtype=np.float64)
    tol = PSD_CLAMP_RTOL * (1.0 + float(np.abs(w).max(initial=0.0)))
    wmin = float(w.min())
    if strict:
        if wmin <= 0.0:
            raise NotPositiveDefiniteError(
                f"matrix is not strictly positive definite (min eigenvalue {wmin:.3e})"
            )
        return w
    if wmin < -tol:
        raise NotPositiveDefiniteError(
            f"matrix is not positive semidefinite (min eigenvalue {wmin:.3e})"
        )
    return np.where(w < 0.0, 0.0, w)


def matrix_function(a, f):
    """Apply a scalar function to a positive semidefinite matrix spectrally.

    Parameters
    ----------
    a : array_like
        PSD Hermitian matrix; eigenvalues in ``[-tol, 0)`` are clamped to 0
        before ``f`` is evaluated.
    f : callable
        Real scalar function defined on ``[0, max eigenvalue]``.

    Returns
    -------
    ndarray
        ``V diag(f(w)) V*``, Hermitian by construction.

    Raises
    ------
    SingularFunctionError
        If ``f`` is undefined (non-finite) at some eigenvalue, e.g. a
        negative power at 0.
    """
    spec = hermitian_eigendecompose(a, check=False)
    w = clamp_psd_eigenvalues(spec.eigenvalues)
    fw = np.empty_like(w)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for i, x in enumerate(w):
            try:
                y = float(f(x))
            except (ArithmeticError, ValueError) as exc:
                raise SingularFunctionError(
                    f"singular matrix function: f undefined at eigenvalue {x!r}"
                ) from exc
            if not np.isfinite(y):
                raise SingularFunctionError(
                    f"singular matrix function: f({x!r}) = {y!r}"
                )
            fw[i] = y
    return spec.assemble(fw)


def spectrum_power(spec, p):
    """Eigenvalues of a PSD spectrum raised to the power ``p``.

    ``0**p`` is taken as 0 for p > 0 and 1 for p == 0 (continuous
    extension on the PSD cone); negative powers require strict positivity.
    """
    w = clamp_psd_eigenvalues(spec.eigenvalues)
    if p < 0.0 and float(w.min()) <= 0.0:
        raise SingularFunctionError(
            "singular matrix function: negative power of a singular matrix"
        )
    with np.errstate(divide="raise", invalid="raise"):
        return np.power(w, p)


def matrix_power_psd(a, p):
    """Fractional power of a PSD matrix via its spectrum.

    Negative ``p`` requires a strictly positive definite input.
    """
    spec = hermitian_eigendecompose(a, check=False)
    return spec.assemble(spectrum_power(spec, p))


def spectral_norm(a):
    """Largest singular value, computed from the spectrum of A*A."""
    a = as_matrix(a)
    w = _eigh(a.conj().T @ a).eigenvalues
    return float(np.sqrt(max(float(w[0]), 0.0)))


# ---------------------------------------------------------------------------
# Matrix file format: {"dim": n, "field": "real"|"complex", "entries": [...]}
# with entries row-major, numbers for the real field and [re, im] pairs for
# the complex field.  Non-square data is rejected.
# ---------------------------------------------------------------------------

def matrix_to_obj(a, field=None):
    """Serialize a matrix to the JSON object form."""
    a = as_matrix(a)
    n = a.shape[0]
    if field is None:
        field = "real" if float(np.abs(a.imag).max()) == 0.0 else "complex"
    if field == "real":
        if float(np.abs(a.imag).max()) != 0.0:
            raise ValueError("matrix has nonzero imaginary part; use field='complex'")
        entries = [float(x) for x in a.real.ravel()]
    elif field == "complex":
        entries = [[float(x.real), float(x.imag)] for x in a.ravel()]
    else:
        raise ValueError(f"unknown field {field!r}; expected 'real' or 'complex'")
    return {"dim": n, "field": field, "entries": entries}


def matrix_from_obj(obj):
    """Parse the JSON object form back into a complex matrix."""
    if not isinstance(obj, dict):
        raise ValueError("matrix object must be a JSON object")
    try:
        n = obj["dim"]
        field = obj["field"]
        entries = obj["entries"]
    except KeyError as exc:
        raise ValueError(f"matrix object is missing key {exc}") from exc
    if not isinstance(n, int) or n < 1:
        raise ShapeError(f"shape error: dim must be a positive integer, got {n!r}")
    if len(entries) != n * n:
        raise ShapeError(
            f"shape error: expected {n * n} entries for dim {n}, got {len(entries)}"
        )
    if field == "real":
        flat = np.asarray(entries, dtype=np.float64).astype(np.complex128)
    elif field == "complex":
        pairs = np.asarray(entries, dtype=np.float64)
        if pairs.shape != (n * n, 2):
            raise ShapeError("shape error: complex entries must be [re, im] pairs")
        flat = pairs[:, 0] + 1j * pairs[:, 1]
    else:
        raise ValueError(f"unknown field {field!r}; expected 'real' or 'complex'")
    return as_matrix(flat.reshape(n, n))


def save_matrix(path, a, field=None):
    """Write a matrix to ``path`` in the JSON file format."""
    with open(path, "w") as fh:
        json.dump(matrix_to_obj(a, field=field), fh)
        fh.write("\n")


def load_matrix(path):
    """Read a matrix from a JSON file produced by :func:`save_matrix`."""
    with open(path) as fh:
        return matrix_from_obj(json.load(fh))
