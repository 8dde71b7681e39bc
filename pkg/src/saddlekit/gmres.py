"""Full (non-restarted) GMRES with right or left preconditioning.

Arnoldi with modified Gram-Schmidt and Givens rotations on the Hessenberg
matrix.  The two preconditioning sides differ in what the residual history
tracks, matching the two conventions found in published tables:

* right (default): solve A P^{-1} v = d, u = P^{-1} v.  The stopping rule
  and the reported history are the TRUE relative residual
  ||A u - d|| / ||d||, recomputed from the assembled iterate each step.

* left: solve P^{-1} A u = P^{-1} d.  The stopping rule and history are
  the PRECONDITIONED relative residual ||P^{-1}(A u - d)|| / ||P^{-1} d||,
  which is what MATLAB's gmres reports; the true residual of the final
  iterate is recorded separately.

The iteration count is the number of Arnoldi steps taken when the
monitored residual first drops below the tolerance.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .system import BlockVector, SaddlePointSystem, operator_apply

BASIS_BLOCK = 64


@dataclass(frozen=True)
class SolveReport:
    converged: bool
    iterations: int
    final_res: float
    res_history: np.ndarray
    wall_seconds: float
    solution: np.ndarray
    side: str = "right"
    true_final_res: float = None

    def __str__(self):
        tag = "converged" if self.converged else "stalled"
        return (f"gmres {tag}: it={self.iterations} res={self.final_res:.4e} "
                f"wall={self.wall_seconds:.3f}s")


def true_residual(sys: SaddlePointSystem, u, d) -> float:
    """||A u - d||_2 / ||d||_2 on the flat vectors."""
    u = u.to_array() if isinstance(u, BlockVector) else np.asarray(u)
    d = d.to_array() if isinstance(d, BlockVector) else np.asarray(d)
    nd = np.linalg.norm(d)
    if nd == 0.0:
        return float(np.linalg.norm(operator_apply(sys, u)))
    return float(np.linalg.norm(operator_apply(sys, u) - d) / nd)


def gmres(sys: SaddlePointSystem, d, precond=None, tol=1e-6, maxit=7000,
          x0=None, side="right") -> SolveReport:
    """Solve A u = d by full GMRES preconditioned by ``precond``.

    ``precond`` is a callable solving P w = r (or None for the identity).
    Starts from the zero vector unless ``x0`` is given.
    """
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    t0 = time.perf_counter()
    d = d.to_array() if isinstance(d, BlockVector) else np.asarray(d, dtype=np.float64)
    N = sys.size
    if d.shape != (N,):
        raise ValueError("rhs length does not match system size")
    apply_p = (lambda r: r) if precond is None else precond

    x0 = np.zeros(N) if x0 is None else np.asarray(x0, dtype=np.float64)
    nd = np.linalg.norm(d)
    if nd == 0.0:
        nd = 1.0
    r0 = d - operator_apply(sys, x0)
    if side == "left":
        r0 = apply_p(r0)
        nd = np.linalg.norm(apply_p(d))
        if nd == 0.0:
            nd = 1.0
    beta = np.linalg.norm(r0)
    history = [float(beta / nd)]
    if history[0] < tol:
        return SolveReport(True, 0, history[0], np.asarray(history),
                           time.perf_counter() - t0, x0, side,
                           true_residual(sys, x0, d))

    maxit = min(maxit, N)
    V = np.empty((N, BASIS_BLOCK))
    V[:, 0] = r0 / beta
    H = np.zeros((BASIS_BLOCK + 1, BASIS_BLOCK))
    cs = np.empty(maxit)
    sn = np.empty(maxit)
    g = np.zeros(maxit + 1)
    g[0] = beta

    def assemble_x(k):
        y = np.linalg.solve(np.triu(H[:k, :k]), g[:k])
        corr = V[:, :k] @ y
        return x0 + (apply_p(corr) if side == "right" else corr)

    it = 0
    converged = False
    x = x0
    for k in range(maxit):
        if k + 1 >= V.shape[1]:
            V = np.concatenate([V, np.empty((N, BASIS_BLOCK))], axis=1)
            H = np.pad(H, ((0, BASIS_BLOCK), (0, BASIS_BLOCK)))
        if side == "right":
            w = operator_apply(sys, apply_p(V[:, k]))
        else:
            w = apply_p(operator_apply(sys, V[:, k]))
        # modified Gram-Schmidt
        for j in range(k + 1):
            H[j, k] = float(V[:, j] @ w)
            w -= H[j, k] * V[:, j]
        H[k + 1, k] = np.linalg.norm(w)
        breakdown = H[k + 1, k] <= 1e-14 * beta
        if not breakdown:
            V[:, k + 1] = w / H[k + 1, k]
        # apply accumulated Givens rotations to the new column
        for j in range(k):
            h0 = cs[j] * H[j, k] + sn[j] * H[j + 1, k]
            H[j + 1, k] = -sn[j] * H[j, k] + cs[j] * H[j + 1, k]
            H[j, k] = h0
        denom = np.hypot(H[k, k], H[k + 1, k])
        cs[k] = H[k, k] / denom
        sn[k] = H[k + 1, k] / denom
        H[k, k] = denom
        H[k + 1, k] = 0.0
        g[k + 1] = -sn[k] * g[k]
        g[k] = cs[k] * g[k]

        it = k + 1
        if side == "right":
            # assemble the iterate and measure the true residual
            x = assemble_x(it)
            res = float(np.linalg.norm(d - operator_apply(sys, x)) / nd)
        else:
            # the Arnoldi least-squares residual IS the preconditioned one
            res = float(abs(g[k + 1]) / nd)
        history.append(res)
        if res < tol:
            converged = True
            break
        if breakdown:
            break

    if side == "left" or not converged:
        x = assemble_x(it)
    return SolveReport(converged, it, history[-1], np.asarray(history),
                       time.perf_counter() - t0, x, side,
                       true_residual(sys, x, d))
