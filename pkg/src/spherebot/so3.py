"""Small-matrix SO(3)/so(3) operations: hat/vee, bracket, adjoint, exponential,
polar projection, trace inner product, and the left-invariant Levi-Civita
connection induced by a diagonal inertia tensor.

All functions are pure and operate on plain numpy arrays: 3-vectors of shape
(3,) and matrices of shape (3, 3). Rotations are row-major 3x3 matrices
mapping body coordinates to inertial coordinates.
"""

import numpy as np

# Orthogonality/determinant tolerance for accepting a matrix as a rotation.
# Looser than the 1e-12 used for algebraic identities: it must absorb
# accumulated integration drift, not just one rounding step.
ROTATION_TOL = 1e-9

_EYE3 = np.eye(3)


def hat(v: np.ndarray) -> np.ndarray:
    """Skew-symmetric matrix of a 3-vector.

    hat(v) @ w equals cross(v, w); the matrix satisfies M == -M.T exactly.
    """
    return np.array([
        [0.0, -v[2], v[1]],
        [v[2], 0.0, -v[0]],
        [-v[1], v[0], 0.0],
    ])


def vee(M: np.ndarray, tol: float = ROTATION_TOL) -> np.ndarray:
    """Inverse of hat. Rejects matrices that are not skew-symmetric.

    Args:
        M: (3, 3) matrix with ||M + M.T||_F <= tol.
        tol: skewness tolerance; a violation signals a caller bug.

    Returns:
        (3,) vector v with hat(v) == M. Exact on hat output.
    """
    skew_defect = np.linalg.norm(M + M.T)
    if not skew_defect <= tol:
        raise ValueError(f"vee: matrix is not skew-symmetric (defect {skew_defect:.3e} > {tol:.1e})")
    return np.array([M[2, 1], M[0, 2], M[1, 0]])


def bracket(v: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Lie bracket on R^3: bracket(v, w) = v x w = vee([hat(v), hat(w)])."""
    return np.cross(v, w)


def adjoint(R: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Adjoint action of a rotation on so(3), identified with R^3.

    Equals vee(R @ hat(w) @ R.T), i.e. simply R @ w.
    """
    return R @ w


def trace_inner(A: np.ndarray, B: np.ndarray) -> float:
    """Trace inner product (1/2) Tr(A.T B) on 3x3 matrices.

    On skew-symmetric matrices it reduces to the Euclidean dot product of
    the corresponding vectors: trace_inner(hat(a), hat(b)) == a . b.
    """
    return 0.5 * float(np.trace(A.T @ B))


def exp_so3(v: np.ndarray) -> np.ndarray:
    """Exponential map so(3) -> SO(3) by the Rodrigues closed form.

    For ||v|| below 1e-6 the two Rodrigues coefficients are evaluated by
    their 2-term Taylor expansions to avoid cancellation.

    Args:
        v: (3,) rotation vector (axis * angle, radians).

    Returns:
        (3, 3) rotation matrix exp(hat(v)).
    """
    th2 = float(v @ v)
    th = np.sqrt(th2)
    K = hat(v)
    if th < 1e-6:
        a = 1.0 - th2 / 6.0
        b = 0.5 - th2 / 24.0
    else:
        a = np.sin(th) / th
        b = (1.0 - np.cos(th)) / th2
    return _EYE3 + a * K + b * (K @ K)


def project_so3(M: np.ndarray, tol: float = 1e-14, max_iter: int = 100) -> np.ndarray:
    """Frobenius-nearest rotation matrix (orthogonal polar factor).

    Uses the iterated-averaging Newton scheme R <- (R + R^-T) / 2, which
    converges quadratically to the polar factor for det(M) > 0.

    Args:
        M: (3, 3) matrix with det(M) > 0.
        tol: Frobenius-norm stopping tolerance between iterates.
        max_iter: iteration cap; reaching it signals a corrupted input.

    Returns:
        (3, 3) matrix in SO(3), closest to M in Frobenius norm.
    """
    det = np.linalg.det(M)
    if not det > 0.0:
        raise ValueError(f"project_so3: det(M) = {det:.3e} <= 0 (reflection or degenerate input)")
    R = np.asarray(M, dtype=float)
    for _ in range(max_iter):
        R_next = 0.5 * (R + np.linalg.inv(R).T)
        if np.linalg.norm(R_next - R) <= tol:
            return R_next
        R = R_next
    raise ValueError("project_so3: polar iteration did not converge")


def connection(J: np.ndarray, v: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Levi-Civita connection coefficients of the left-invariant metric J.

    For constant (pseudo-velocity) fields v, w on so(3) ~ R^3:

        nabla_v w = (v x w)/2 + J^-1 (v x (J w) - (J v) x w) / 2

    The bilinear map is torsion-free and metric-compatible with respect to
    the inner product <a, b>_J = a . (J b).

    Args:
        J: (3,) strictly positive principal inertia entries.
        v, w: (3,) vectors.
    """
    J = np.asarray(J, dtype=float)
    if not np.all(J > 0.0):
        raise ValueError("connection: inertia entries must be strictly positive")
    return 0.5 * np.cross(v, w) + 0.5 * (np.cross(v, J * w) - np.cross(J * v, w)) / J


def rotation_defect(R: np.ndarray) -> float:
    """Frobenius distance of R.T @ R from the identity."""
    return float(np.linalg.norm(R.T @ R - _EYE3))


def is_rotation(R: np.ndarray, tol: float = ROTATION_TOL) -> bool:
    """True if R is orthogonal with determinant one, within tol."""
    if R.shape != (3, 3) or not np.all(np.isfinite(R)):
        return False
    return rotation_defect(R) <= tol and abs(np.linalg.det(R) - 1.0) <= tol


def require_rotation(R: np.ndarray, tol: float = ROTATION_TOL, what: str = "matrix") -> np.ndarray:
    """Validate that R lies in SO(3); returns R unchanged.

    Raises ValueError with the measured defect otherwise.
    """
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3):
        raise ValueError(f"{what}: expected shape (3, 3), got {R.shape}")
    if not np.all(np.isfinite(R)):
        raise ValueError(f"{what}: non-finite entries")
    defect = rotation_defect(R)
    ddet = abs(np.linalg.det(R) - 1.0)
    if defect > tol or ddet > tol:
        raise ValueError(
            f"{what}: not a rotation (orthogonality defect {defect:.3e}, det defect {ddet:.3e}, tol {tol:.1e})"
        )
    return R
