"""Generalized shift-splitting preconditioners for the block saddle system.

One parameterized form covers the whole family:

    P = [ L1 + t*A   s*B^T    0    ]
        [  -s*B       L2    -s*C^T ]
        [   0        s*C      L3   ]

with SPD shifts L1 (optionally absent), L2, L3 and scalars s > 0, t >= 0.
The named variants are parameter choices of this form; global scalar
prefactors are folded into the shifts, which leaves right-preconditioned
GMRES iterates unchanged.

Application solves P w = r through the block factorization with the two
inner SPD matrices

    Xhat = L2 + s^2 C^T L3^{-1} C
    Ablk = L1 + t*A + s^2 B^T Xhat^{-1} B

both handled by dense Cholesky at desk scale (or Ablk by inner CG).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dense import CholeskyFactor, NotPositiveDefinite, cholesky, cholesky_solve
from .sparse import SparseMatrix
from .system import BlockVector, SaddlePointSystem, to_dense

KINDS = ("pess", "lpess", "ss", "rss", "egss", "rpgss")

ABLOCK_DENSE_LIMIT = 3000
INNER_CG_TOL = 1e-12


# -- SPD operand handling ---------------------------------------------
# A shift may be given as None (absent), a positive scalar (multiple of the
# identity), a 1-d array (diagonal), a SparseMatrix, or a dense 2-d array.


def operand_dense(op, dim):
    if op is None:
        return np.zeros((dim, dim))
    if np.isscalar(op):
        return float(op) * np.eye(dim)
    if isinstance(op, SparseMatrix):
        if op.nrows != dim or op.ncols != dim:
            raise ValueError("shift operand dimension mismatch")
        return op.to_dense()
    arr = np.asarray(op, dtype=np.float64)
    if arr.ndim == 1:
        if arr.shape[0] != dim:
            raise ValueError("diagonal shift operand dimension mismatch")
        return np.diag(arr)
    if arr.shape != (dim, dim):
        raise ValueError("shift operand dimension mismatch")
    return arr


def operand_is_zero(op):
    return op is None


@dataclass(frozen=True)
class GssConfig:
    """Shift-splitting parameter set (L1, L2, L3, s, t).

    ``lambda1 is None`` encodes the relaxed variants that drop the (1,1)
    shift entirely.
    """

    lambda1: object
    lambda2: object
    lambda3: object
    s: float
    t: float
    kind: str = "pess"

    def __post_init__(self):
        if self.s <= 0:
            raise ValueError("s must be positive")
        if self.t < 0:
            raise ValueError("t must be nonnegative")
        if operand_is_zero(self.lambda1) and self.t == 0:
            raise ValueError("a zero (1,1) shift requires t > 0")
        if operand_is_zero(self.lambda2) or operand_is_zero(self.lambda3):
            raise ValueError("lambda2 and lambda3 must be SPD")

    @property
    def is_pess(self):
        return (not operand_is_zero(self.lambda1)) and self.t == self.s


def make_config(kind, sys: SaddlePointSystem = None, **params) -> GssConfig:
    """Build the parameter set for a named variant.

    pess:  lambda1, lambda2, lambda3, s           (t = s)
    lpess: lambda2, lambda3, s                    (no lambda1, t = s)
    ss:    alpha, s_half prefactors folded        ((a/2)I shifts, s = t = 1/2)
    rss:   alpha                                  (no lambda1)
    egss:  alpha, beta, gamma, P, Q, W            ((a/2)P, (b/2)Q, (g/2)W)
    rpgss: beta, gamma, Q, W                      (no lambda1, s = t = 1)
    """
    kind = kind.lower()
    if kind not in KINDS:
        raise ValueError(f"unknown preconditioner kind {kind!r}")
    if kind == "pess":
        return GssConfig(params["lambda1"], params["lambda2"], params["lambda3"],
                         s=float(params["s"]), t=float(params["s"]), kind=kind)
    if kind == "lpess":
        return GssConfig(None, params["lambda2"], params["lambda3"],
                         s=float(params["s"]), t=float(params["s"]), kind=kind)
    if kind == "ss":
        a = float(params["alpha"])
        if a <= 0:
            raise ValueError("alpha must be positive")
        return GssConfig(a / 2, a / 2, a / 2, s=0.5, t=0.5, kind=kind)
    if kind == "rss":
        a = float(params["alpha"])
        if a <= 0:
            raise ValueError("alpha must be positive")
        return GssConfig(None, a / 2, a / 2, s=0.5, t=0.5, kind=kind)
    if kind == "egss":
        a, b, g = (float(params[k]) for k in ("alpha", "beta", "gamma"))
        if min(a, b, g) <= 0:
            raise ValueError("alpha, beta, gamma must be positive")
        P = params.get("P", 1.0)
        Q = params.get("Q", 1.0)
        W = params.get("W", 1.0)
        return GssConfig(_scaled(a / 2, P), _scaled(b / 2, Q), _scaled(g / 2, W),
                         s=0.5, t=0.5, kind=kind)
    # rpgss
    b, g = float(params["beta"]), float(params["gamma"])
    if min(b, g) <= 0:
        raise ValueError("beta and gamma must be positive")
    Q = params.get("Q", 1.0)
    W = params.get("W", 1.0)
    return GssConfig(None, _scaled(b, Q), _scaled(g, W), s=1.0, t=1.0, kind=kind)


def _scaled(coef, op):
    if np.isscalar(op):
        return coef * float(op)
    if isinstance(op, SparseMatrix):
        return SparseMatrix(coef * op.to_scipy())
    return coef * np.asarray(op, dtype=np.float64)


# -- build and apply ---------------------------------------------------


@dataclass(frozen=True)
class GssPreconditioner:
    config: GssConfig
    n: int
    m: int
    p: int
    xhat_factor: CholeskyFactor
    ablock_factor: CholeskyFactor  # None under the inner-cg strategy
    lambda3_factor: CholeskyFactor
    _B: np.ndarray
    _C: np.ndarray
    _lam1: np.ndarray
    _A: object  # SparseMatrix, kept for the inner-cg operator

    def apply(self, r):
        """Solve P w = r. Accepts a flat array (optionally multi-column)
        or a BlockVector."""
        as_block = isinstance(r, BlockVector)
        vec = r.to_array() if as_block else np.asarray(r, dtype=np.float64)
        n, m, p = self.n, self.m, self.p
        s = self.config.s
        r1, r2, r3 = vec[:n], vec[n : n + m], vec[n + m :]
        v1 = cholesky_solve(self.xhat_factor,
                            r2 + s * (self._C.T @ cholesky_solve(self.lambda3_factor, r3)))
        v = r1 - s * (self._B.T @ v1)
        w1 = self._solve_ablock(v)
        v2 = cholesky_solve(self.xhat_factor, s * (self._B @ w1))
        w2 = v1 + v2
        w3 = cholesky_solve(self.lambda3_factor, r3 - s * (self._C @ w2))
        out = np.concatenate([w1, w2, w3])
        return BlockVector.from_array(out, n, m, p) if as_block else out

    __call__ = apply

    def _solve_ablock(self, v):
        if self.ablock_factor is not None:
            return cholesky_solve(self.ablock_factor, v)
        return _cg(self._ablock_matvec, v, tol=INNER_CG_TOL)

    def _ablock_matvec(self, x):
        cfg = self.config
        y = cfg.t * self._apply_A(x) + cfg.s**2 * (
            self._B.T @ cholesky_solve(self.xhat_factor, self._B @ x)
        )
        if not operand_is_zero(cfg.lambda1):
            y = y + self._lam1 @ x
        return y

    def _apply_A(self, x):
        return self._A.matvec(x) if x.ndim == 1 else self._A.to_scipy() @ x

    def dense_matrix(self):
        """The explicit preconditioner matrix (oracle for tests)."""
        n, m, p = self.n, self.m, self.p
        cfg = self.config
        P = np.zeros((n + m + p, n + m + p))
        P[:n, :n] = self._lam1 + cfg.t * self._A.to_dense()
        P[:n, n : n + m] = cfg.s * self._B.T
        P[n : n + m, :n] = -cfg.s * self._B
        P[n : n + m, n : n + m] = operand_dense(cfg.lambda2, m)
        P[n : n + m, n + m :] = -cfg.s * self._C.T
        P[n + m :, n : n + m] = cfg.s * self._C
        P[n + m :, n + m :] = operand_dense(cfg.lambda3, p)
        return P


def _cg(matvec, b, tol):
    """Plain CG on an SPD operator; supports 1-d or column-stacked rhs."""
    if b.ndim > 1:
        return np.stack([_cg(matvec, b[:, j], tol) for j in range(b.shape[1])], axis=1)
    x = np.zeros_like(b)
    r = b.copy()
    pdir = r.copy()
    rr = float(r @ r)
    nb = np.linalg.norm(b)
    if nb == 0.0:
        return x
    for _ in range(10 * b.shape[0]):
        Ap = matvec(pdir)
        alpha = rr / float(pdir @ Ap)
        x += alpha * pdir
        r -= alpha * Ap
        rr_new = float(r @ r)
        if np.sqrt(rr_new) <= tol * nb:
            break
        pdir = r + (rr_new / rr) * pdir
        rr = rr_new
    return x


def build(sys: SaddlePointSystem, cfg: GssConfig, strategy="dense") -> GssPreconditioner:
    """Factor the inner SPD subsystems of the shift-splitting preconditioner."""
    if strategy not in ("dense", "inner-cg"):
        raise ValueError("strategy must be 'dense' or 'inner-cg'")
    n, m, p = sys.n, sys.m, sys.p
    s = cfg.s
    Bd = sys.B.to_dense()
    Cd = sys.C.to_dense()
    lam3 = operand_dense(cfg.lambda3, p)
    try:
        lam3_factor = cholesky(lam3)
    except NotPositiveDefinite as exc:
        raise NotPositiveDefinite(f"lambda3 block failed Cholesky: {exc}") from exc

    xhat = operand_dense(cfg.lambda2, m) + s**2 * (
        Cd.T @ cholesky_solve(lam3_factor, Cd)
    )
    xhat = 0.5 * (xhat + xhat.T)
    try:
        xhat_factor = cholesky(xhat)
    except NotPositiveDefinite as exc:
        raise NotPositiveDefinite(f"Xhat block failed Cholesky: {exc}") from exc

    lam1 = operand_dense(cfg.lambda1, n)
    ablock_factor = None
    if strategy == "dense":
        if n > ABLOCK_DENSE_LIMIT:
            raise ValueError(
                f"dense strategy limited to n <= {ABLOCK_DENSE_LIMIT}; use inner-cg"
            )
        ablock = lam1 + cfg.t * sys.A.to_dense() + s**2 * (
            Bd.T @ cholesky_solve(xhat_factor, Bd)
        )
        ablock = 0.5 * (ablock + ablock.T)
        try:
            ablock_factor = cholesky(ablock)
        except NotPositiveDefinite as exc:
            raise NotPositiveDefinite(f"A-block failed Cholesky: {exc}") from exc

    return GssPreconditioner(
        config=cfg, n=n, m=m, p=p,
        xhat_factor=xhat_factor, ablock_factor=ablock_factor,
        lambda3_factor=lam3_factor,
        _B=Bd, _C=Cd, _lam1=lam1, _A=sys.A,
    )


# -- exact block diagonal baseline -------------------------------------


@dataclass(frozen=True)
class BdPreconditioner:
    n: int
    m: int
    p: int
    a_factor: CholeskyFactor
    s_factor: CholeskyFactor
    css_factor: CholeskyFactor

    def apply(self, r):
        as_block = isinstance(r, BlockVector)
        vec = r.to_array() if as_block else np.asarray(r, dtype=np.float64)
        n, m = self.n, self.m
        w = np.concatenate([
            cholesky_solve(self.a_factor, vec[:n]),
            cholesky_solve(self.s_factor, vec[n : n + m]),
            cholesky_solve(self.css_factor, vec[n + m :]),
        ])
        return BlockVector.from_array(w, n, m, self.p) if as_block else w

    __call__ = apply


def build_bd(sys: SaddlePointSystem) -> BdPreconditioner:
    """Exact block diagonal baseline diag(A, S, C S^{-1} C^T), S = B A^{-1} B^T."""
    Ad = sys.A.to_dense()
    Bd = sys.B.to_dense()
    Cd = sys.C.to_dense()
    a_factor = cholesky(Ad)
    S = Bd @ cholesky_solve(a_factor, Bd.T)
    S = 0.5 * (S + S.T)
    s_factor = cholesky(S)
    CSC = Cd @ cholesky_solve(s_factor, Cd.T)
    CSC = 0.5 * (CSC + CSC.T)
    css_factor = cholesky(CSC)
    return BdPreconditioner(sys.n, sys.m, sys.p, a_factor, s_factor, css_factor)


def apply_bd(P: BdPreconditioner, r):
    return P.apply(r)


# -- splitting identity -------------------------------------------------


def gss_dense_matrix(sys: SaddlePointSystem, cfg: GssConfig):
    """Densified P for a config without building factorizations."""
    n, m, p = sys.n, sys.m, sys.p
    P = np.zeros((sys.size, sys.size))
    P[:n, :n] = operand_dense(cfg.lambda1, n) + cfg.t * sys.A.to_dense()
    P[:n, n : n + m] = cfg.s * sys.B.to_dense().T
    P[n : n + m, :n] = -cfg.s * sys.B.to_dense()
    P[n : n + m, n : n + m] = operand_dense(cfg.lambda2, m)
    P[n : n + m, n + m :] = -cfg.s * sys.C.to_dense().T
    P[n + m :, n : n + m] = cfg.s * sys.C.to_dense()
    P[n + m :, n + m :] = operand_dense(cfg.lambda3, p)
    return P


def splitting_residual(sys: SaddlePointSystem, cfg: GssConfig) -> float:
    """Frobenius norm of (P - Q) - coefficient matrix for the splitting.

    For t = s the splitting complement Q = Sigma - (1-s)*Amat is formed
    explicitly; otherwise Q is defined as P - Amat and the residual is zero
    by construction.
    """
    Amat = to_dense(sys)
    P = gss_dense_matrix(sys, cfg)
    if cfg.t == cfg.s:
        n, m = sys.n, sys.m
        sigma = np.zeros_like(P)
        sigma[:n, :n] = operand_dense(cfg.lambda1, sys.n)
        sigma[n : n + m, n : n + m] = operand_dense(cfg.lambda2, sys.m)
        sigma[n + m :, n + m :] = operand_dense(cfg.lambda3, sys.p)
        Q = sigma - (1.0 - cfg.s) * Amat
    else:
        Q = P - Amat
    return float(np.linalg.norm((P - Q) - Amat, "fro"))
