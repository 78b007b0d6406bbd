"""Entanglement-assisted capacity optimization and related quantities.

The capacity is the maximum over input states of
f(rho) = H(rho) + H(N(rho)) - H(E(rho)), with E the environment output.
f is concave, so a conditional-gradient (Frank-Wolfe) ascent over the
density-operator spectrahedron converges with a duality-gap certificate:
the gap lambda_max(G) - tr(G rho) bounds the remaining suboptimality.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qmath import (
    EIG_ZERO_TOL,
    DensityOperator,
    DimensionMismatchError,
    QuantumChannel,
    _apply_raw,
    _check_hermitian,
    _complementary_raw,
    _state_matrix,
    entropy_of_spectrum,
    matrix_to_json,
    quantum_mutual_information,
    von_neumann_entropy,
)

MAX_ITERS = 100_000
LINESEARCH_TOL = 1e-12
_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


class ConvergenceError(RuntimeError):
    """Optimizer hit the iteration cap; `.best` holds the best result so far."""

    def __init__(self, message, best):
        super().__init__(message)
        self.best = best


class OptimizationCancelled(RuntimeError):
    """Progress callback requested a stop; `.best` holds the best result so far."""

    def __init__(self, message, best):
        super().__init__(message)
        self.best = best


@dataclass
class CeResult:
    value: float
    rho: np.ndarray
    iterations: int
    gap_bound: float

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "rho": matrix_to_json(self.rho),
            "iterations": self.iterations,
            "gap_bound": self.gap_bound,
        }


@dataclass(frozen=True)
class EnergyConstraint:
    """Linear cap tr(observable rho) <= bound on the average input state."""

    observable: np.ndarray
    bound: float

    def __post_init__(self):
        obs = np.asarray(self.observable, dtype=np.complex128)
        _check_hermitian(obs)
        evals = np.linalg.eigvalsh(obs)
        if evals[0] < -1e-10:
            raise ValueError(f"observable must be PSD, min eigenvalue {evals[0]:.3e}")
        if self.bound < 0.0:
            raise ValueError(f"bound must be nonnegative, got {self.bound}")
        object.__setattr__(self, "observable", obs)


def holevo_chi(ensemble) -> float:
    """H(sum p_i rho_i) - sum p_i H(rho_i) in bits."""
    avg = ensemble.average()
    chi = von_neumann_entropy(avg)
    for p, s in zip(ensemble.probs, ensemble.states):
        if p > 0.0:
            chi -= p * von_neumann_entropy(s)
    return chi


def _log2_psd(mat: np.ndarray) -> np.ndarray:
    # eigenvalues below the zero tolerance are clamped before the log
    evals, vecs = np.linalg.eigh(mat)
    evals = np.clip(evals.real, EIG_ZERO_TOL, None)
    return (vecs * np.log2(evals)) @ vecs.conj().T


def _entropy_psd(mat: np.ndarray) -> float:
    return entropy_of_spectrum(np.linalg.eigvalsh(mat))


def _channel_adjoint(kraus_stack: np.ndarray, x: np.ndarray) -> np.ndarray:
    # sum_k A_k^dag X A_k
    return np.einsum("koi,op,kpj->ij", kraus_stack.conj(), x, kraus_stack,
                     optimize=True)


def _env_adjoint(kraus_stack: np.ndarray, x: np.ndarray) -> np.ndarray:
    # sum_{kl} X_{kl} A_k^dag A_l
    b = np.tensordot(x, kraus_stack, axes=([1], [0]))
    return np.einsum("koi,koj->ij", kraus_stack.conj(), b, optimize=True)


class _Objective:
    """Cached channel data for repeated objective/gradient evaluation."""

    def __init__(self, channel: QuantumChannel):
        self.channel = channel
        self.stack = np.stack(channel.kraus)

    def primary(self, rho):
        return _apply_raw(self.channel, rho)

    def env(self, rho):
        return _complementary_raw(self.channel, rho)

    def value(self, rho) -> float:
        return (_entropy_psd(rho) + _entropy_psd(self.primary(rho))
                - _entropy_psd(self.env(rho)))

    def value_parts(self, rho, out, env) -> float:
        return _entropy_psd(rho) + _entropy_psd(out) - _entropy_psd(env)

    def gradient(self, rho) -> np.ndarray:
        g = (-_log2_psd(rho)
             - _channel_adjoint(self.stack, _log2_psd(self.primary(rho)))
             + _env_adjoint(self.stack, _log2_psd(self.env(rho))))
        return 0.5 * (g + g.conj().T)


def _golden_max(fun, lo=0.0, hi=1.0, xtol=LINESEARCH_TOL):
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fun(d)
    x = 0.5 * (a + b)
    return x, fun(x)


def _frank_wolfe(obj: _Objective, rho0: np.ndarray, oracle, tol: float,
                 max_iters: int, callback):
    rho = rho0
    fval = obj.value(rho)
    gap = np.inf
    stalled = 0
    for it in range(max_iters):
        grad = obj.gradient(rho)
        sigma, gap = oracle(grad, rho)
        if gap <= tol:
            return CeResult(value=fval, rho=rho, iterations=it, gap_bound=float(gap))
        out_rho, out_sig = obj.primary(rho), obj.primary(sigma)
        env_rho, env_sig = obj.env(rho), obj.env(sigma)

        def along(t):
            return obj.value_parts((1 - t) * rho + t * sigma,
                                   (1 - t) * out_rho + t * out_sig,
                                   (1 - t) * env_rho + t * env_sig)

        t_star, f_star = _golden_max(along)
        # ascent guarantee: never accept a step below the current value
        if f_star < fval:
            t_star, f_star = 0.0, fval
        # a zero step repeats forever (same gradient, same vertex): give up
        stalled = stalled + 1 if t_star == 0.0 else 0
        if stalled >= 2:
            raise ConvergenceError(
                f"stalled at gap {gap:.3e} before reaching {tol} (float precision floor)",
                CeResult(value=fval, rho=rho, iterations=it + 1, gap_bound=float(gap)))
        rho = (1 - t_star) * rho + t_star * sigma
        rho = 0.5 * (rho + rho.conj().T)
        fval = f_star
        if callback is not None and callback(it, fval, float(gap)):
            raise OptimizationCancelled(
                "cancelled by callback",
                CeResult(value=fval, rho=rho, iterations=it + 1, gap_bound=float(gap)))
    raise ConvergenceError(
        f"no convergence to gap {tol} within {max_iters} iterations",
        CeResult(value=fval, rho=rho, iterations=max_iters, gap_bound=float(gap)))


def ce_maximize(channel: QuantumChannel, tol: float = 1e-7,
                max_iters: int = MAX_ITERS, callback=None) -> CeResult:
    """Maximize H(rho) + H(N(rho)) - H(E(rho)) over density operators.

    Conditional-gradient ascent from the maximally mixed state with exact
    golden-section line search. Stops when the duality gap
    lambda_max(G) - tr(G rho) drops to `tol` (bits); the returned value is
    then within `tol` of the maximum. Raises ConvergenceError with the best
    iterate attached if the iteration cap is reached, and
    OptimizationCancelled if `callback(iteration, value, gap)` returns true.
    """
    obj = _Objective(channel)
    d = channel.d_in
    rho0 = np.eye(d, dtype=np.complex128) / d

    def oracle(grad, rho):
        evals, vecs = np.linalg.eigh(grad)
        u = vecs[:, -1]
        sigma = np.outer(u, u.conj())
        gap = evals[-1] - float(np.sum(grad * rho.T).real)
        return sigma, gap

    return _frank_wolfe(obj, rho0, oracle, tol, max_iters, callback)


def ce_maximize_constrained(channel: QuantumChannel, constraint: EnergyConstraint,
                            tol: float = 1e-7, max_iters: int = MAX_ITERS,
                            callback=None) -> CeResult:
    """Capacity maximization restricted to tr(observable rho) <= bound.

    The linear subproblem is solved over the two-point family mixing the top
    gradient eigenprojector with the observable's ground-state projector,
    taking the largest feasible weight on the former. The reported gap bound
    is therefore certified over that family rather than the full feasible
    set; for the energy-style constraints exercised here the optimum is in
    the family's convex hull.
    """
    obs = constraint.observable
    bound = float(constraint.bound)
    if obs.shape[0] != channel.d_in:
        raise DimensionMismatchError("observable dimension mismatch")
    oevals, ovecs = np.linalg.eigh(obs)
    lam_min = float(oevals[0])
    if bound < lam_min - 1e-12:
        raise ValueError(f"infeasible constraint: bound {bound} < min eigenvalue {lam_min}")
    w = ovecs[:, 0]
    ground = np.outer(w, w.conj())
    w_val = float(np.real(w.conj() @ obs @ w))

    d = channel.d_in
    mixed = np.eye(d, dtype=np.complex128) / d
    mixed_val = float(np.trace(obs @ mixed).real)
    if mixed_val <= bound:
        rho0 = mixed
    elif abs(mixed_val - w_val) < 1e-15:
        rho0 = ground
    else:
        alpha = (bound - w_val) / (mixed_val - w_val)
        rho0 = alpha * mixed + (1 - alpha) * ground

    def oracle(grad, rho):
        evals, vecs = np.linalg.eigh(grad)
        u = vecs[:, -1]
        top = np.outer(u, u.conj())
        u_val = float(np.real(u.conj() @ obs @ u))
        if u_val <= bound + 1e-14:
            sigma = top
        else:
            t = (bound - w_val) / (u_val - w_val)
            t = min(max(t, 0.0), 1.0)
            sigma = t * top + (1 - t) * ground
        gap = float(np.sum(grad * sigma.T).real) - float(np.sum(grad * rho.T).real)
        return sigma, max(gap, 0.0)

    obj = _Objective(channel)
    return _frank_wolfe(obj, rho0, oracle, tol, max_iters, callback)


# ---------------------------------------------------------------------------
# Amplitude-damping one-parameter families.

def _ad_channel_entropies(p: float, x: float):
    # closed forms for the damping channel on diag(1-x, x):
    # output spectrum {1-(1-p)x, (1-p)x}, environment spectrum {1-px, px}
    from .channels import amplitude_damping

    ch = amplitude_damping(p)
    rho = np.diag([1.0 - x, x]).astype(np.complex128)
    return quantum_mutual_information(ch, rho)


def ad_ce(p: float):
    """Maximum of the capacity objective over inputs diag(1-x, x).

    Returns (value, x_star). For the damping channel the unconstrained
    maximizer is diagonal, so this equals the full capacity.
    """
    x, val = _golden_max(lambda x: _ad_channel_entropies(p, x), 0.0, 1.0, 1e-10)
    return val, x


def ad_ch(p: float):
    """Unassisted one-shot Holevo maximum over the two-state family.

    Signal states have Bloch off-diagonals +-sqrt(x(1-x)) and are used with
    equal probabilities; returns (value, x_star).
    """
    from .channels import amplitude_damping

    ch = amplitude_damping(p)

    def chi(x):
        s = np.sqrt(max(x * (1.0 - x), 0.0))
        plus = np.array([[1.0 - x, s], [s, x]], dtype=np.complex128)
        minus = np.array([[1.0 - x, -s], [-s, x]], dtype=np.complex128)
        out_p = _apply_raw(ch, plus)
        out_m = _apply_raw(ch, minus)
        avg = 0.5 * (out_p + out_m)
        return (_entropy_psd(avg)
                - 0.5 * _entropy_psd(out_p) - 0.5 * _entropy_psd(out_m))

    # coarse scan then golden refinement; chi need not be concave in x
    grid = np.linspace(0.0, 1.0, 201)
    vals = [chi(x) for x in grid]
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    x, val = _golden_max(chi, lo, hi, 1e-10)
    return val, x


def ad_asymptotics(p: float, x: float):
    """Leading-order terms near p = 1 at fixed x.

    Returns (ce_leading, ch_leading) =
    (-x (1-p) log2(1-p), -x (1-x) (1-p) log2(1-p)).
    """
    if p >= 1.0:
        return 0.0, 0.0
    base = -(1.0 - p) * np.log2(1.0 - p)
    return x * base, x * (1.0 - x) * base


# ---------------------------------------------------------------------------
# Square-root ("pretty good") measurement for pure-state codewords.

def pgm_error(codewords, projector):
    """Exact square-root-measurement error and its quadratic upper bound.

    codewords: sequence of unit vectors t_i. projector: Hermitian idempotent
    P defining the decoding subspace. With v_i = P t_i and
    phi = sum_i v_i v_i^dag, the decoder measures
    {phi^{-1/2} v_i v_i^dag phi^{-1/2}}. Returns (exact, bound) arrays where
    bound_i = 2 (1 - S_ii) + sum_{j != i} |S_ij|^2 and S_ij = t_i^dag P t_j.
    Raises ValueError if every projected codeword vanishes.
    """
    vecs = [np.asarray(t, dtype=np.complex128).reshape(-1) for t in codewords]
    if not vecs:
        raise ValueError("no codewords")
    proj = np.asarray(projector, dtype=np.complex128)
    _check_hermitian(proj)
    if np.max(np.abs(proj @ proj - proj)) > 1e-9:
        raise ValueError("projector is not idempotent within tolerance")
    projected = [proj @ t for t in vecs]
    phi = np.zeros_like(proj)
    for v in projected:
        phi += np.outer(v, v.conj())
    evals, basis = np.linalg.eigh(phi)
    support = evals > EIG_ZERO_TOL
    if not np.any(support):
        raise ValueError("all projected codewords vanish; decoder undefined")
    inv_sqrt = (basis[:, support] / np.sqrt(evals[support])) @ basis[:, support].conj().T
    m = len(vecs)
    exact = np.empty(m)
    for i, v in enumerate(projected):
        amp = float(np.real(v.conj() @ inv_sqrt @ v))
        exact[i] = 1.0 - amp * amp
    smat = np.empty((m, m), dtype=np.complex128)
    for i, t in enumerate(vecs):
        for j, u in enumerate(vecs):
            smat[i, j] = t.conj() @ proj @ u
    bound = np.empty(m)
    for i in range(m):
        off = np.sum(np.abs(smat[i, :]) ** 2) - np.abs(smat[i, i]) ** 2
        bound[i] = 2.0 * (1.0 - smat[i, i].real) + float(off)
    return exact, bound


# ---------------------------------------------------------------------------
# Structural diagnostics.

def ce_additivity_slack(ch1: QuantumChannel, ch2: QuantumChannel,
                        tol: float = 1e-5) -> float:
    """|ce(ch1 x ch2) - ce(ch1) - ce(ch2)| with each term solved to `tol`."""
    from .qmath import tensor_channels

    joint = ce_maximize(tensor_channels(ch1, ch2), tol=tol).value
    single = ce_maximize(ch1, tol=tol).value + ce_maximize(ch2, tol=tol).value
    return abs(joint - single)


def concavity_slack(channel: QuantumChannel, rho0, rho1, p0: float) -> float:
    """f(p0 rho0 + (1-p0) rho1) - p0 f(rho0) - (1-p0) f(rho1); >= 0 up to float noise."""
    m0 = _state_matrix(rho0)
    m1 = _state_matrix(rho1)
    mix = p0 * m0 + (1.0 - p0) * m1
    f = quantum_mutual_information
    return f(channel, mix) - p0 * f(channel, m0) - (1.0 - p0) * f(channel, m1)


# ---------------------------------------------------------------------------
# Independent brute-force oracle for qubit-input channels.

def bloch_grid_ce(channel: QuantumChannel, resolution: float = 0.01):
    """Grid maximum of the capacity objective over the Bloch ball.

    Walks rho = (I + r . sigma)/2 on a cubic lattice of the given resolution
    intersected with the unit ball, evaluating the objective with vectorized
    closed-form 2x2 spectra (and batched eigensolves for larger environment
    or output dimensions). Independent check of `ce_maximize`; returns
    (max value, argmax Bloch vector).
    """
    if channel.d_in != 2:
        raise DimensionMismatchError("bloch_grid_ce needs a qubit-input channel")
    paulis = [np.array([[0, 1], [1, 0]], dtype=np.complex128),
              np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
              np.array([[1, 0], [0, -1]], dtype=np.complex128)]
    half = np.eye(2, dtype=np.complex128) / 2
    out0 = _apply_raw(channel, half)
    outp = [_apply_raw(channel, p) / 2 for p in paulis]
    env0 = _complementary_raw(channel, half)
    envp = [_complementary_raw(channel, p) / 2 for p in paulis]

    axis = np.arange(-1.0, 1.0 + resolution / 2, resolution)
    best_val = -np.inf
    best_r = None
    for rx in axis:
        ry_g, rz_g = np.meshgrid(axis, axis, indexing="ij")
        mask = rx * rx + ry_g**2 + rz_g**2 <= 1.0 + 1e-12
        if not mask.any():
            continue
        ry = ry_g[mask]
        rz = rz_g[mask]
        rnorm = np.sqrt(rx * rx + ry**2 + rz**2)
        h_in = _h2_vec(0.5 * (1.0 + rnorm))
        h_out = _family_entropy(out0, outp, rx, ry, rz)
        h_env = _family_entropy(env0, envp, rx, ry, rz)
        vals = h_in + h_out - h_env
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val = float(vals[i])
            best_r = (float(rx), float(ry[i]), float(rz[i]))
    return best_val, best_r


def _h2_vec(p):
    p = np.clip(p, 0.0, 1.0)
    q = 1.0 - p
    out = np.zeros_like(p)
    m = p > EIG_ZERO_TOL
    out[m] -= p[m] * np.log2(p[m])
    m = q > EIG_ZERO_TOL
    out[m] -= q[m] * np.log2(q[m])
    return out


def _family_entropy(base, parts, rx, ry, rz):
    """Entropies of base + rx parts[0] + ry parts[1] + rz parts[2], vectorized."""
    dim = base.shape[0]
    n = ry.shape[0]
    mats = np.broadcast_to(base, (n, dim, dim)).copy()
    mats += rx * parts[0]
    mats += ry[:, None, None] * parts[1]
    mats += rz[:, None, None] * parts[2]
    if dim == 2:
        m = 0.5 * (mats[:, 0, 0].real + mats[:, 1, 1].real)
        det = (mats[:, 0, 0].real * mats[:, 1, 1].real
               - (mats[:, 0, 1].real**2 + mats[:, 0, 1].imag**2))
        disc = np.sqrt(np.clip(m * m - det, 0.0, None))
        lam1 = np.clip(m + disc, 0.0, None)
        lam2 = np.clip(m - disc, 0.0, None)
        return _spec_entropy_cols(np.stack([lam1, lam2], axis=1))
    out = np.empty(n)
    step = 131072
    for lo in range(0, n, step):
        evals = np.linalg.eigvalsh(mats[lo:lo + step])
        out[lo:lo + step] = _spec_entropy_cols(np.clip(evals, 0.0, None))
    return out


def _spec_entropy_cols(lams):
    safe = np.where(lams >= EIG_ZERO_TOL, lams, 1.0)
    return -np.sum(lams * np.log2(safe), axis=1)
