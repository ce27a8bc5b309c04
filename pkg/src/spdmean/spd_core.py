"""Core primitives for symmetric positive definite (SPD) matrices.

Dense symmetric eigendecomposition, matrix functions through the
eigenvalues, and the affine-invariant geodesic and distance. All
functions take and return plain ``numpy`` arrays; SPD inputs are
validated with :func:`check_spd` at API boundaries.
"""

from typing import Callable, NamedTuple

import numpy as np

from .errors import DimensionMismatch, DomainError, NonConvergence

# Validation tolerances (relative).
SYM_TOL = 1e-12
ORTHO_TOL = 1e-10
RECON_TOL = 1e-10
COMMUTE_TOL = 1e-8
POSITIVITY_FLOOR = 1e-13


class EigenPair(NamedTuple):
    """Orthonormal eigenvectors and descending eigenvalues of a symmetric matrix."""

    vectors: np.ndarray
    values: np.ndarray


def sym(a):
    """Symmetrize a square matrix as (A + Aᵀ)/2."""
    return (a + a.T) / 2.0


def check_dims(a, b):
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape mismatch: {a.shape} vs {b.shape}")


def check_symmetric(a, tol=SYM_TOL):
    """Validate near-symmetry and return the symmetrized matrix."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    scale = np.linalg.norm(a)
    if np.linalg.norm(a - a.T) > tol * max(scale, 1e-300):
        raise DomainError("matrix is not symmetric")
    return sym(a)


def check_spd(a, tol=SYM_TOL):
    """Validate that ``a`` is SPD; returns the symmetrized matrix.

    Positivity uses a relative floor: the smallest eigenvalue must exceed
    ``POSITIVITY_FLOOR`` times the largest, so the check survives rescaling.

    Raises
    ------
    DomainError
        If ``a`` is not symmetric or has a non-positive eigenvalue.
    """
    a = check_symmetric(a, tol=tol)
    w = np.linalg.eigvalsh(a)
    if w[0] <= POSITIVITY_FLOOR * abs(w[-1]):
        raise DomainError(f"matrix is not positive definite (eigenvalue {w[0]:.6g})")
    return a


def sym_eig(m):
    """Eigendecomposition of a symmetric matrix, eigenvalues descending.

    Parameters
    ----------
    m : ndarray, shape (p, p)
        Symmetric matrix (validated to ``SYM_TOL`` and symmetrized first).

    Returns
    -------
    EigenPair
        Orthogonal ``vectors`` and descending ``values`` with
        ``vectors @ diag(values) @ vectors.T == m`` up to round-off.
    """
    m = check_symmetric(m)
    try:
        w, u = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(f"symmetric eigensolver failed: {exc}") from exc
    return EigenPair(vectors=np.ascontiguousarray(u[:, ::-1]), values=w[::-1].copy())


def _spectral_apply(m, fvals_of):
    """Rebuild U diag(f(λ)) Uᵀ from a vectorized eigenvalue map."""
    u, w = sym_eig(m)
    fw = fvals_of(w)
    if not np.all(np.isfinite(fw)):
        raise DomainError("scalar function not finite on the spectrum")
    return sym((u * fw) @ u.T)


def matrix_fn(m, f: Callable[[float], float]):
    """Apply a scalar function to a symmetric matrix through its eigenvalues.

    ``f`` is called once per eigenvalue; a ``ValueError`` or non-finite
    result is reported as :class:`DomainError`.
    """

    def fvals(w):
        out = np.empty_like(w)
        for i, x in enumerate(w):
            try:
                out[i] = f(float(x))
            except (ValueError, ZeroDivisionError, OverflowError) as exc:
                raise DomainError(f"eigenvalue {x:.6g} outside function domain") from exc
        return out

    return _spectral_apply(m, fvals)


def _require_positive_spectrum(w, what):
    if w[-1] <= 0:
        raise DomainError(f"{what} requires a positive definite matrix "
                          f"(eigenvalue {w[-1]:.6g})")


def log_m(a):
    """Matrix logarithm of an SPD matrix."""
    u, w = sym_eig(a)
    _require_positive_spectrum(w, "log_m")
    return sym((u * np.log(w)) @ u.T)


def exp_m(a):
    """Matrix exponential of a symmetric matrix."""
    return _spectral_apply(a, np.exp)


def sqrt_m(a):
    """Principal square root of an SPD matrix."""
    u, w = sym_eig(a)
    _require_positive_spectrum(w, "sqrt_m")
    return sym((u * np.sqrt(w)) @ u.T)


def inv_sqrt_m(a):
    """Inverse principal square root of an SPD matrix."""
    u, w = sym_eig(a)
    _require_positive_spectrum(w, "inv_sqrt_m")
    return sym((u / np.sqrt(w)) @ u.T)


def inv_m(a):
    """Inverse of an SPD matrix via its eigendecomposition."""
    u, w = sym_eig(a)
    _require_positive_spectrum(w, "inv_m")
    return sym((u / w) @ u.T)


def pow_m(a, t):
    """Real matrix power ``a**t`` of an SPD matrix."""
    u, w = sym_eig(a)
    _require_positive_spectrum(w, "pow_m")
    return sym((u * w**float(t)) @ u.T)


def frob_inner(a, b):
    """Frobenius inner product ⟨A, B⟩ = Σᵢⱼ Aᵢⱼ Bᵢⱼ = tr(A Bᵀ)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    check_dims(a, b)
    return float(np.sum(a * b))


def geodesic(x1, x2, t):
    """Point at parameter ``t`` on the affine-invariant geodesic from x1 to x2.

    Computes ``x1^{1/2} (x1^{-1/2} x2 x1^{-1/2})^t x1^{1/2}``; ``t=0``
    returns x1, ``t=1`` returns x2, ``t=1/2`` is the two-matrix geometric
    mean.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    check_dims(x1, x2)
    s = sqrt_m(x1)
    si = inv_sqrt_m(x1)
    return sym(s @ pow_m(sym(si @ x2 @ si), t) @ s)


def riem_dist(x1, x2):
    """Affine-invariant Riemannian distance between two SPD matrices.

    ``dist(x1, x2) = ‖log(x1^{-1/2} x2 x1^{-1/2})‖_F``; symmetric in its
    arguments and invariant under congruence ``X ↦ M X Mᵀ``.
    """
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    check_dims(x1, x2)
    si = inv_sqrt_m(x1)
    w = np.linalg.eigvalsh(sym(si @ x2 @ si))
    if w[0] <= 0:
        raise DomainError("riem_dist requires positive definite inputs")
    return float(np.linalg.norm(np.log(w)))
