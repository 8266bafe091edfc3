"""ADMM solvers for Laplacian-structured graph learning.

Four estimators share one primal-dual loop:

* ``learn_connected_gaussian`` -- connected graph, Gaussian likelihood, from a
  similarity matrix S.
* ``learn_k_component_gaussian`` -- graph with exactly k connected components,
  Gaussian likelihood, rank-restricted auxiliary variable plus a spectral
  subspace penalty.
* ``learn_connected_t`` -- connected graph, Student-t likelihood, from the raw
  data matrix X.
* ``learn_kt`` -- k components plus Student-t likelihood.

Each outer iteration updates the auxiliary precision variable Theta through a
closed-form log-det prox, runs a short projected-gradient inner loop on the
edge weights w (step size from the analytic curvature bound), optionally
refreshes the spectral subspace V, and performs dual ascent on the two
constraint blocks Theta = L(w) and degrees(w) = d.  Iterations stop when both
primal residuals fall below the tolerance in max-norm.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .errors import (
    DimensionError,
    DivergenceError,
    EvaluationError,
    ParameterError,
)
from .operators import (
    SymmetricMatrix,
    WeightVector,
    _as_matrix,
    _as_weights,
    adjacency_op,
    edge_pairs,
    laplacian_op,
)
from .spectral import DEFAULT_RANK_TOL, fan_subspace, prox_logdet, prox_logdet_rank

__all__ = [
    "METHODS",
    "SolverConfig",
    "DualState",
    "SolverTrace",
    "GraphEstimate",
    "init_weights",
    "w_inner_update_gaussian",
    "weighted_scatter",
    "augmented_lagrangian",
    "learn_connected_gaussian",
    "learn_k_component_gaussian",
    "learn_connected_t",
    "learn_kt",
]

METHODS = ("connected-gaussian", "k-gaussian", "connected-t", "kt")
_K_METHODS = ("k-gaussian", "kt")
_T_METHODS = ("connected-t", "kt")


@dataclass(frozen=True)
class SolverConfig:
    """Knobs shared by the four solvers.

    degree_target may be a scalar (broadcast to all nodes), a length-p vector,
    or None for the all-ones default.  eta = None resolves to
    100 * mean|S| at solve time (k-component methods only).  nu is required
    for the Student-t methods and must exceed 2.
    """

    rho: float = 1.0
    eta: float | None = None
    nu: float | None = None
    k: int = 1
    degree_target: object = None
    tol: float = 1e-6
    max_iter: int = 10000
    inner_iter: int = 5
    adaptive_rho: bool = False
    rho_growth: float = 1.1
    rho_max: float = 1e6
    rank_tol: float = DEFAULT_RANK_TOL
    init: str = "pinv-neg"

    def resolved_degrees(self, p):
        "Degree target as a validated length-p vector."
        d = self.degree_target
        if d is None:
            return np.ones(p)
        if np.isscalar(d):
            d = np.full(p, float(d))
        d = np.asarray(d, dtype=float)
        if d.shape != (p,):
            raise DimensionError(f"degree target has shape {d.shape}, expected ({p},)")
        if np.any(d <= 0) or not np.all(np.isfinite(d)):
            raise ParameterError("degree targets must be positive and finite")
        return d

    def validate(self, p, method):
        if self.rho <= 0:
            raise ParameterError(f"rho must be positive, got {self.rho}")
        if self.tol <= 0:
            raise ParameterError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1 or self.inner_iter < 1:
            raise ParameterError("max_iter and inner_iter must be >= 1")
        if self.init not in ("pinv", "pinv-neg"):
            raise ParameterError(f"unknown init mode {self.init!r}")
        if method in _K_METHODS:
            if not 1 <= self.k < p:
                raise ParameterError(f"component count k={self.k} must satisfy 1 <= k < p={p}")
            if self.eta is not None and self.eta <= 0:
                raise ParameterError(f"eta must be positive, got {self.eta}")
        if method in _T_METHODS:
            if self.nu is None:
                raise ParameterError("nu is required for Student-t methods")
            if self.nu <= 2:
                raise ParameterError(f"nu must exceed 2, got {self.nu}")
        self.resolved_degrees(p)


@dataclass
class DualState:
    """ADMM state: auxiliary precision Theta and dual pair (Y, y)."""

    theta: SymmetricMatrix
    Y: SymmetricMatrix
    y: np.ndarray


@dataclass
class SolverTrace:
    """Per-iteration residual norms and augmented-Lagrangian values."""

    iters: np.ndarray
    r_norm: np.ndarray
    s_norm: np.ndarray
    v_norm: np.ndarray
    lagrangian: np.ndarray

    def __len__(self):
        return self.iters.size


@dataclass
class GraphEstimate:
    """Result of a solver run."""

    weights: WeightVector
    laplacian: SymmetricMatrix
    node_names: list
    method: str
    converged: bool
    iterations: int
    trace: SolverTrace
    config: SolverConfig

    @property
    def adjacency(self):
        return adjacency_op(self.weights)


def init_weights(S, negate=False):
    """Initial edge weights read from the pseudo-inverse of a similarity matrix.

    Default mode projects the strict-lower-triangle entries of pinv(S) onto
    the nonnegative orthant; negate=True reads the negated off-diagonals
    instead (the adjacency-style readout, which is the meaningful warm start
    when pinv(S) is close to a Laplacian).
    """
    S = _as_matrix(S)
    P = np.linalg.pinv(S, hermitian=True)
    ii, jj = edge_pairs(S.shape[0])
    wt = P[ii, jj]
    if negate:
        wt = -wt
    return WeightVector(np.maximum(wt, 0.0), S.shape[0])


def weighted_scatter(X, w, nu):
    """Student-t reweighted scatter matrix.

    Each observation x_i is weighted by (p + nu) / (x_i^T L(w) x_i + nu); the
    result is the weighted average of the outer products x_i x_i^T.  The
    quadratic forms are evaluated through the per-edge squared differences, so
    no p x p matrix is formed per observation.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DimensionError("data matrix must be 2-d (observations x nodes)")
    n, p = X.shape
    if nu is None or nu <= 2:
        raise ParameterError(f"nu must exceed 2, got {nu}")
    values, _ = _as_weights(w, p)
    ii, jj = edge_pairs(p)
    q = (X[:, ii] - X[:, jj]) ** 2 @ values
    alpha = (p + nu) / (q + nu)
    return SymmetricMatrix((X * alpha[:, None]).T @ X / n)


def w_inner_update_gaussian(w, theta, Y, y, S, config, eta_term=None):
    """Run the projected-gradient inner loop of the Gaussian w-subproblem.

    Performs config.inner_iter steps of
    w <- (w - (a + b) / (2 rho (2p - 1)))_+ where a and b are the Laplacian-
    and degree-adjoint parts of the subproblem gradient, with an early exit
    once the step falls below tol/10 in max-norm.  eta_term, when given, is
    added to S (the spectral-subspace penalty of the k-component methods).
    """
    values, p = _as_weights(w)
    S = _as_matrix(S)
    if eta_term is not None:
        S = S + _as_matrix(eta_term)
    ii, jj = edge_pairs(p)
    d = config.resolved_degrees(p)
    rho = config.rho
    c0 = _kernels.lap_adjoint(
        S - _as_matrix(Y) - rho * _as_matrix(theta), ii, jj
    ) + _kernels.degree_adjoint(np.asarray(y, dtype=float) - rho * d, ii, jj)
    out = _kernels.mm_inner_gaussian(
        values, c0, rho, p, config.inner_iter, config.tol / 10.0, ii, jj
    )
    return WeightVector(out, p)


def _logdet_term(theta, J, method, k, rank_tol):
    """-log det part of the objective.

    Connected methods use log det(Theta + J); k-component methods use the
    pseudo-determinant over eigenvalues above rank_tol * lambda_max and require
    at least p - k of them.
    """
    p = theta.shape[0]
    if method in _K_METHODS:
        lam = np.linalg.eigvalsh(theta)
        cutoff = rank_tol * max(float(lam[-1]), 0.0)
        pos = lam[lam > cutoff]
        if pos.size < p - k:
            raise EvaluationError(
                f"Theta has {pos.size} positive eigenvalues, needs >= {p - k}"
            )
        return -float(np.sum(np.log(pos)))
    sign, logdet = np.linalg.slogdet(theta + J)
    if sign <= 0:
        raise EvaluationError("Theta + J is not positive definite")
    return -float(logdet)


def _student_objective(sq_diff, w, p, nu, n):
    q = sq_diff @ w
    return (p + nu) / n * float(np.sum(np.log1p(q / nu)))


def augmented_lagrangian(state, w, data, config, method, V=None):
    """Evaluate the partial augmented Lagrangian of a solver state.

    data is the similarity matrix S for the Gaussian methods and the n x p
    data matrix X for the Student-t methods.  V (the spectral subspace) is
    required by the k-component methods; when omitted it is taken as the
    minimizing subspace of the current Laplacian.
    """
    if method not in METHODS:
        raise ParameterError(f"unknown method {method!r}")
    values, p = _as_weights(w)
    ii, jj = edge_pairs(p)
    theta = _as_matrix(state.theta)
    Y = _as_matrix(state.Y)
    y = np.asarray(state.y, dtype=float)
    d = config.resolved_degrees(p)
    rho = config.rho
    Lw = _kernels.lap_matrix(values, ii, jj, p)

    if method in _T_METHODS:
        X = np.asarray(data, dtype=float)
        sq_diff = (X[:, ii] - X[:, jj]) ** 2
        objective = _student_objective(sq_diff, values, p, config.nu, X.shape[0])
    else:
        S = _as_matrix(data)
        objective = float(_kernels.lap_adjoint(S, ii, jj) @ values)

    if method in _K_METHODS:
        eta = config.eta
        if eta is None:
            raise ParameterError("eta must be resolved for k-component methods")
        if V is None:
            V = fan_subspace(Lw, config.k)
        P = np.asarray(V) @ np.asarray(V).T
        objective += eta * float(_kernels.lap_adjoint(P, ii, jj) @ values)

    J = np.full((p, p), 1.0 / p)
    objective += _logdet_term(theta, J, method, config.k, config.rank_tol)

    r = theta - Lw
    s = _kernels.degree_vector(values, ii, jj, p) - d
    objective += float(y @ s) + rho / 2.0 * float(s @ s)
    objective += float(np.sum(Y * r)) + rho / 2.0 * float(np.sum(r * r))
    return objective


def _check_finite(iteration, *arrays):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise DivergenceError(iteration)


def _run_admm(method, S, X, config, names, callback=None, w0=None):
    """Shared ADMM loop; S is used by Gaussian methods, X by Student-t ones.

    callback(iteration, snapshot) is invoked after each outer iteration with
    copies of the iterates; intended for tests and diagnostics.  w0 overrides
    the pseudo-inverse initialization of the edge weights.
    """
    if method in _T_METHODS:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[0] < 2:
            raise DimensionError("data matrix must be 2-d with at least 2 rows")
        n, p = X.shape
        S = X.T @ X / n
    else:
        S = _as_matrix(S)
        p = S.shape[0]
    if p < 2:
        raise DimensionError("need at least 2 nodes")
    config.validate(p, method)
    if not np.all(np.isfinite(S)):
        raise DimensionError("similarity matrix contains non-finite entries")

    names = [str(x) for x in names] if names is not None else [str(i) for i in range(p)]
    if len(names) != p:
        raise DimensionError(f"{len(names)} node names for p={p} nodes")

    k_mode = method in _K_METHODS
    t_mode = method in _T_METHODS
    rho = float(config.rho)
    k = config.k
    eta = config.eta
    if k_mode and eta is None:
        eta = 100.0 * float(np.mean(np.abs(S)))
    d = config.resolved_degrees(p)
    ii, jj = edge_pairs(p)
    step_tol = config.tol / 10.0
    J = np.full((p, p), 1.0 / p)

    if w0 is None:
        w = np.asarray(init_weights(S, negate=config.init == "pinv-neg").values)
    else:
        w = np.asarray(_as_weights(w0, p)[0]).copy()
    Y = np.zeros((p, p))
    y = np.zeros(p)
    theta = _kernels.lap_matrix(w, ii, jj, p)
    V = np.asarray(fan_subspace(theta, k).columns) if k_mode else None
    if t_mode:
        sq_diff = np.ascontiguousarray((X[:, ii] - X[:, jj]) ** 2)
        nu = float(config.nu)
        scale = (p + nu) / X.shape[0]

    it_log, r_log, s_log, v_log, lag_log = [], [], [], [], []
    converged = False
    iterations = 0

    for l in range(config.max_iter):
        theta_prev = theta
        if k_mode:
            theta = np.asarray(
                prox_logdet_rank(rho * _kernels.lap_matrix(w, ii, jj, p) - Y, rho, k).entries
            )
        else:
            theta = (
                np.asarray(
                    prox_logdet(rho * (_kernels.lap_matrix(w, ii, jj, p) + J) - Y, rho).entries
                )
                - J
            )

        C = -Y - rho * theta
        if k_mode:
            C = C + eta * (V @ V.T)
        if not t_mode:
            C = C + S
        c0 = _kernels.lap_adjoint(C, ii, jj) + _kernels.degree_adjoint(y - rho * d, ii, jj)
        if t_mode:
            w = _kernels.mm_inner_student(
                w, c0, sq_diff, nu, scale, rho, p, config.inner_iter, step_tol, ii, jj
            )
        else:
            w = _kernels.mm_inner_gaussian(
                w, c0, rho, p, config.inner_iter, step_tol, ii, jj
            )

        Lw = _kernels.lap_matrix(w, ii, jj, p)
        if k_mode:
            V = np.asarray(fan_subspace(Lw, k).columns)
        r = theta - Lw
        s = _kernels.degree_vector(w, ii, jj, p) - d
        Y = Y + rho * r
        y = y + rho * s
        iterations = l + 1
        _check_finite(iterations, w, theta, Y, y)

        # augmented Lagrangian at the full post-iteration state
        obj = (
            _student_objective(sq_diff, w, p, nu, X.shape[0])
            if t_mode
            else float(_kernels.lap_adjoint(S, ii, jj) @ w)
        )
        if k_mode:
            obj += eta * float(_kernels.lap_adjoint(V @ V.T, ii, jj) @ w)
        obj += _logdet_term(theta, J, method, k, config.rank_tol)
        obj += float(y @ s) + rho / 2.0 * float(s @ s)
        obj += float(np.sum(Y * r)) + rho / 2.0 * float(np.sum(r * r))

        r_norm = float(np.max(np.abs(r)))
        s_norm = float(np.max(np.abs(s)))
        v_norm = float(np.max(np.abs(rho * _kernels.lap_adjoint(theta - theta_prev, ii, jj))))
        it_log.append(iterations)
        r_log.append(r_norm)
        s_log.append(s_norm)
        v_log.append(v_norm)
        lag_log.append(obj)

        if callback is not None:
            callback(
                iterations,
                {
                    "theta": theta.copy(),
                    "w": w.copy(),
                    "Y": Y.copy(),
                    "y": y.copy(),
                    "r": r.copy(),
                    "s": s.copy(),
                    "rho": rho,
                    "V": None if V is None else V.copy(),
                },
            )

        if config.adaptive_rho and len(lag_log) >= 2 and lag_log[-1] > lag_log[-2]:
            rho = min(rho * config.rho_growth, config.rho_max)

        if r_norm <= config.tol and s_norm <= config.tol:
            converged = True
            break

    trace = SolverTrace(
        iters=np.asarray(it_log, dtype=int),
        r_norm=np.asarray(r_log),
        s_norm=np.asarray(s_log),
        v_norm=np.asarray(v_log),
        lagrangian=np.asarray(lag_log),
    )
    weights = WeightVector(w, p)
    snapshot = replace(config, eta=eta if k_mode else config.eta, degree_target=d)
    return GraphEstimate(
        weights=weights,
        laplacian=laplacian_op(weights),
        node_names=names,
        method=method,
        converged=converged,
        iterations=iterations,
        trace=trace,
        config=snapshot,
    )


def learn_connected_gaussian(S, config=None, names=None, callback=None, w0=None):
    """Estimate a connected graph from a similarity matrix.

    Alternates the closed-form log-det prox for the auxiliary precision
    (shifted by the rank-one constant matrix J so the determinant is proper),
    the projected-gradient inner loop for the edge weights, and dual ascent,
    until both primal residuals are below config.tol in max-norm.
    """
    return _run_admm("connected-gaussian", S, None, config or SolverConfig(), names, callback, w0)


def learn_k_component_gaussian(S, config=None, names=None, callback=None, w0=None):
    """Estimate a graph with exactly config.k connected components.

    The auxiliary precision is restricted to rank p - k by the prox itself;
    the weight subproblem carries an extra eta * V V^T similarity term whose
    subspace V tracks the k smallest-eigenvalue eigenvectors of the current
    Laplacian.  Node degrees are pinned to the degree target, which rules out
    isolated nodes.
    """
    config = config or SolverConfig()
    return _run_admm("k-gaussian", S, None, config, names, callback, w0)


def learn_connected_t(X, config=None, names=None, callback=None, w0=None):
    """Estimate a connected graph from raw data under a Student-t model.

    Identical to the Gaussian solver except that the weight subproblem's
    similarity matrix is re-weighted at every inner iterate: observations with
    large Mahalanobis-type quadratic form under the current Laplacian are
    down-weighted by (p + nu) / (x^T L(w) x + nu).
    """
    config = config or SolverConfig()
    return _run_admm("connected-t", None, X, config, names, callback, w0)


def learn_kt(X, config=None, names=None, callback=None, w0=None):
    """Estimate a k-component graph under a Student-t model.

    Combines the rank-restricted prox and spectral subspace term of the
    k-component Gaussian solver with the re-weighted scatter of the Student-t
    solver.
    """
    config = config or SolverConfig()
    return _run_admm("kt", None, X, config, names, callback, w0)
