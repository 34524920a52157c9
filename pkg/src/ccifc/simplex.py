"""Dense phase-1 simplex for small linear feasibility problems.

Decides whether ``{x >= 0 : A_eq x = b}`` is nonempty for one constraint
matrix and a whole batch of right-hand sides at once.  Bland's rule is used
for both the entering and leaving choice, so the method cannot cycle.
"""
import numpy as np

PIVOT_TOL = 1e-12
FEAS_TOL = 1e-9


def phase1(A, B, max_iter=2000):
    """Minimum total infeasibility of ``A x = b, x >= 0`` for each row ``b`` of ``B``.

    Parameters
    ----------
    A : ndarray, shape (m, n)
    B : ndarray, shape (k, m)

    Returns
    -------
    ndarray, shape (k,)
        Optimal phase-1 objective (sum of artificial variables).  The system
        is feasible iff this is below :data:`FEAS_TOL`.
    """
    A = np.asarray(A, float)
    B = np.atleast_2d(np.asarray(B, float))
    m, n = A.shape
    k = B.shape[0]
    sign = np.where(B < 0, -1.0, 1.0)
    # tableau rows: m constraints + objective; columns: n structural, m artificial, rhs
    T = np.zeros((k, m + 1, n + m + 1))
    T[:, :m, :n] = sign[:, :, None] * A[None]
    T[:, :m, n:n + m] = np.eye(m)[None]
    T[:, :m, -1] = sign * B
    basis = np.tile(np.arange(n, n + m), (k, 1))
    # a structural unit column (+1 after the sign flip) can start in the basis
    unit = (np.abs(A) > 0).sum(axis=0) == 1
    for j in np.nonzero(unit)[0]:
        i = int(np.nonzero(A[:, j])[0][0])
        ok = (sign[:, i] * A[i, j] == 1.0) & (basis[:, i] >= n)
        basis[ok, i] = j
    art = basis >= n                                      # rows still carried by an artificial
    T[:, m, :n + m] = -(art[:, :, None] * T[:, :m, :n + m]).sum(axis=1)
    T[:, m, n:n + m] += 1.0
    T[:, m, -1] = -(art * T[:, :m, -1]).sum(axis=1)
    active = np.ones(k, bool)
    for _ in range(max_iter):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        obj = T[idx, m, :n + m]
        neg = obj < -PIVOT_TOL
        has = neg.any(axis=1)
        active[idx[~has]] = False
        idx, neg = idx[has], neg[has]
        if idx.size == 0:
            break
        col = np.argmax(neg, axis=1)                      # smallest improving index
        colv = T[idx, :m, col]
        rhs = T[idx, :m, -1]
        ok = colv > PIVOT_TOL
        ratio = np.where(ok, rhs / np.where(ok, colv, 1.0), np.inf)
        best = ratio.min(axis=1)
        if np.any(~np.isfinite(best)):
            # unbounded direction cannot occur in phase 1 (objective >= 0)
            raise RuntimeError("phase-1 simplex found an unbounded column")
        tie = ok & (ratio <= best[:, None] + PIVOT_TOL * (1 + np.abs(best[:, None])))
        bidx = np.where(tie, basis[idx], np.iinfo(np.int64).max)
        r = np.argmin(bidx, axis=1)                        # smallest leaving index
        prow = T[idx, r, :] / T[idx, r, col][:, None]
        factor = T[idx, :, col].copy()
        factor[np.arange(idx.size), r] = 0.0
        T[idx] -= factor[:, :, None] * prow[:, None, :]
        T[idx, r, :] = prow
        basis[idx, r] = col
    else:
        raise RuntimeError("phase-1 simplex did not converge")
    return np.maximum(-T[:, m, -1], 0.0)


def feasible(A, B, tol=FEAS_TOL):
    """Boolean feasibility of ``A x = b, x >= 0`` per row of ``B``."""
    return phase1(A, B) <= tol
