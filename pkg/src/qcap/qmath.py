"""Finite-dimensional density operators, quantum channels, and entropy primitives.

All entropies are in bits (log base 2). Matrices are dense complex numpy
arrays; a channel is a list of Kraus operators mapping dimension d_in to
d_out. The complementary (environment) output of a channel with Kraus list
{A_k} is the c x c matrix E(rho)_{kl} = tr(A_k rho A_l^dag), whose entropy
equals the entropy exchange of the channel on rho.
"""

from __future__ import annotations

import json

import numpy as np

HERM_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
KRAUS_TOL = 1e-9
EIG_ZERO_TOL = 1e-12

_LOG2E = float(np.log2(np.e))


class InvalidStateError(ValueError):
    """Matrix fails a density-operator invariant beyond tolerance."""


class InvalidChannelError(ValueError):
    """Kraus list fails the completeness relation beyond tolerance."""


class DimensionMismatchError(ValueError):
    """Operands have incompatible dimensions."""


def _as_complex_matrix(mat) -> np.ndarray:
    arr = np.asarray(mat, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def _check_hermitian(mat: np.ndarray, tol: float = HERM_TOL) -> None:
    dev = np.max(np.abs(mat - mat.conj().T)) if mat.size else 0.0
    if dev > tol:
        raise InvalidStateError(f"matrix is not Hermitian (deviation {dev:.3e})")


class DensityOperator:
    """Validated density operator.

    Parameters
    ----------
    mat : array_like
        Square complex matrix. Must be Hermitian within 1e-10, unit trace
        within 1e-10, and positive semidefinite with eigenvalues >= -1e-10.

    Raises
    ------
    InvalidStateError
        If any invariant fails beyond tolerance.
    """

    __slots__ = ("mat",)

    def __init__(self, mat):
        arr = _as_complex_matrix(mat)
        _check_hermitian(arr)
        tr = arr.trace().real
        if abs(arr.trace() - 1.0) > TRACE_TOL:
            raise InvalidStateError(f"trace is {tr!r}, expected 1")
        evals = np.linalg.eigvalsh(arr)
        if evals.min() < -PSD_TOL:
            raise InvalidStateError(f"negative eigenvalue {evals.min():.3e}")
        arr = 0.5 * (arr + arr.conj().T)
        arr.flags.writeable = False
        self.mat = arr

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def from_diag(cls, probs) -> "DensityOperator":
        return cls(np.diag(np.asarray(probs, dtype=np.complex128)))

    @classmethod
    def maximally_mixed(cls, d: int) -> "DensityOperator":
        return cls(np.eye(d, dtype=np.complex128) / d)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.mat)

    def __repr__(self) -> str:
        return f"DensityOperator(dim={self.dim})"


class PureState:
    """Unit vector on a tensor product of registers.

    `dims` records the tensor factors; their product must equal the vector
    length and the norm must be 1 within 1e-10.
    """

    __slots__ = ("vec", "dims")

    def __init__(self, vec, dims=None):
        arr = np.asarray(vec, dtype=np.complex128).reshape(-1)
        if dims is None:
            dims = (arr.size,)
        dims = tuple(int(d) for d in dims)
        if int(np.prod(dims)) != arr.size:
            raise DimensionMismatchError(f"dims {dims} do not multiply to {arr.size}")
        norm = np.linalg.norm(arr)
        if abs(norm - 1.0) > 1e-10:
            raise InvalidStateError(f"norm is {norm!r}, expected 1")
        arr = arr.copy()
        arr.flags.writeable = False
        self.vec = arr
        self.dims = dims

    def density(self) -> DensityOperator:
        return DensityOperator(np.outer(self.vec, self.vec.conj()))

    def __repr__(self) -> str:
        return f"PureState(dims={self.dims})"


class QuantumChannel:
    """Completely positive trace-preserving map given by Kraus operators.

    Parameters
    ----------
    kraus : sequence of array_like
        Operators of common shape (d_out, d_in). Completeness
        sum_k A_k^dag A_k = I must hold within 1e-9.
    """

    __slots__ = ("kraus", "d_in", "d_out")

    def __init__(self, kraus):
        ops = [np.asarray(k, dtype=np.complex128) for k in kraus]
        if not ops:
            raise InvalidChannelError("empty Kraus list")
        shape = ops[0].shape
        if len(shape) != 2 or any(op.shape != shape for op in ops):
            raise InvalidChannelError("Kraus operators must share one 2-D shape")
        d_out, d_in = shape
        acc = np.zeros((d_in, d_in), dtype=np.complex128)
        for op in ops:
            acc += op.conj().T @ op
        dev = np.max(np.abs(acc - np.eye(d_in)))
        if dev > KRAUS_TOL:
            raise InvalidChannelError(f"completeness violated by {dev:.3e}")
        for op in ops:
            op.flags.writeable = False
        self.kraus = tuple(ops)
        self.d_in = d_in
        self.d_out = d_out

    @property
    def env_dim(self) -> int:
        return len(self.kraus)

    def __repr__(self) -> str:
        return f"QuantumChannel(d_in={self.d_in}, d_out={self.d_out}, env={self.env_dim})"


def _state_matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityOperator):
        return rho.mat
    if isinstance(rho, PureState):
        return np.outer(rho.vec, rho.vec.conj())
    return _as_complex_matrix(rho)


def von_neumann_entropy(rho) -> float:
    """Entropy -tr(rho log2 rho) in bits.

    Accepts a DensityOperator or a Hermitian PSD matrix. Eigenvalues below
    1e-12 contribute zero. Raises InvalidStateError for non-Hermitian or
    non-PSD input beyond tolerance.
    """
    mat = _state_matrix(rho)
    if not isinstance(rho, (DensityOperator, PureState)):
        _check_hermitian(mat)
    evals = np.linalg.eigvalsh(mat)
    if evals.size and evals.min() < -PSD_TOL:
        raise InvalidStateError(f"negative eigenvalue {evals.min():.3e}")
    return entropy_of_spectrum(evals)


def entropy_of_spectrum(evals) -> float:
    """Shannon entropy in bits of a nonnegative spectrum, clamping tiny values."""
    lam = np.asarray(evals, dtype=np.float64)
    lam = lam[lam >= EIG_ZERO_TOL]
    if lam.size == 0:
        return 0.0
    return float(-np.dot(lam, np.log2(lam)))


def apply_channel(channel: QuantumChannel, rho) -> DensityOperator:
    """Primary output sum_k A_k rho A_k^dag as a validated DensityOperator."""
    mat = _state_matrix(rho)
    if mat.shape[0] != channel.d_in:
        raise DimensionMismatchError(
            f"state dim {mat.shape[0]} != channel input dim {channel.d_in}")
    return DensityOperator(_apply_raw(channel, mat))


def _apply_raw(channel: QuantumChannel, mat: np.ndarray) -> np.ndarray:
    out = np.zeros((channel.d_out, channel.d_out), dtype=np.complex128)
    for op in channel.kraus:
        out += op @ mat @ op.conj().T
    return out


def complementary_apply(channel: QuantumChannel, rho) -> DensityOperator:
    """Environment output E(rho)_{kl} = tr(A_k rho A_l^dag)."""
    mat = _state_matrix(rho)
    if mat.shape[0] != channel.d_in:
        raise DimensionMismatchError(
            f"state dim {mat.shape[0]} != channel input dim {channel.d_in}")
    return DensityOperator(_complementary_raw(channel, mat))


def _complementary_raw(channel: QuantumChannel, mat: np.ndarray) -> np.ndarray:
    # E_{kl} = tr(A_k rho A_l^dag) = sum_{ij} (A_k rho)_{ij} conj(A_l)_{ij}
    c = channel.env_dim
    prods = [op @ mat for op in channel.kraus]
    env = np.empty((c, c), dtype=np.complex128)
    for k in range(c):
        for l in range(k, c):
            val = np.sum(prods[k] * channel.kraus[l].conj())
            env[k, l] = val
            env[l, k] = val.conjugate()
    return env


def entropy_exchange(channel: QuantumChannel, rho) -> float:
    """Entropy of the environment output, H(E(rho)), in bits."""
    return von_neumann_entropy(complementary_apply(channel, rho))


def entropy_exchange_via_purification(channel: QuantumChannel, rho) -> float:
    """Entropy exchange computed as H((N x I) Phi_rho) on a purification of rho.

    Numerically independent route used to cross-check `entropy_exchange`.
    """
    mat = _state_matrix(rho)
    psi = purify(DensityOperator(mat))
    big = extend_channel(channel, mat.shape[0])
    joint = _apply_raw(big, np.outer(psi.vec, psi.vec.conj()))
    return von_neumann_entropy(joint)


def purify(rho: DensityOperator) -> PureState:
    """Canonical purification sum_i sqrt(lambda_i) |v_i> x |i>.

    Eigenvalues are sorted descending; ties are broken by lexicographic
    comparison of eigenvector entries and each eigenvector's phase is fixed
    so its first nonvanishing component is real positive. Tracing out the
    second (reference) factor returns rho.
    """
    evals, vecs = np.linalg.eigh(rho.mat)
    order = np.argsort(-evals, kind="stable")
    evals = evals[order]
    vecs = vecs[:, order]
    d = rho.dim
    cols = []
    for i in range(d):
        v = vecs[:, i]
        nz = np.flatnonzero(np.abs(v) > 1e-12)
        if nz.size:
            v = v * (np.abs(v[nz[0]]) / v[nz[0]])
        cols.append(v)
    # stable lexicographic tie-break inside near-degenerate groups
    i = 0
    while i < d:
        j = i + 1
        while j < d and abs(evals[j] - evals[i]) <= 1e-12:
            j += 1
        if j - i > 1:
            keys = sorted(range(i, j),
                          key=lambda m: tuple((c.real, c.imag) for c in cols[m]))
            cols[i:j] = [cols[m] for m in keys]
        i = j
    vec = np.zeros(d * d, dtype=np.complex128)
    for i in range(d):
        lam = evals[i]
        if lam < EIG_ZERO_TOL:
            continue
        vec += np.sqrt(lam) * np.kron(cols[i], _basis_vec(d, i))
    vec /= np.linalg.norm(vec)
    return PureState(vec, dims=(d, d))


def _basis_vec(d: int, i: int) -> np.ndarray:
    v = np.zeros(d, dtype=np.complex128)
    v[i] = 1.0
    return v


def partial_trace(state, dims, keep) -> np.ndarray:
    """Partial trace over the factors not listed in `keep`.

    Parameters
    ----------
    state : DensityOperator, PureState, or matrix
        Operator (or vector) on the tensor product described by `dims`.
    dims : sequence of int
        Dimensions of the tensor factors, row-major order.
    keep : int or sequence of int
        Indices of factors to retain, in their original order.

    Returns
    -------
    numpy.ndarray
        Matrix on the kept factors.
    """
    dims = [int(d) for d in dims]
    if isinstance(keep, (int, np.integer)):
        keep = [int(keep)]
    keep = sorted(int(k) for k in keep)
    n = len(dims)
    if any(k < 0 or k >= n for k in keep):
        raise DimensionMismatchError(f"keep={keep} out of range for {n} factors")
    traced = [i for i in range(n) if i not in keep]
    if isinstance(state, PureState) or (
            isinstance(state, np.ndarray) and state.ndim == 1):
        vec = state.vec if isinstance(state, PureState) else np.asarray(
            state, dtype=np.complex128)
        if vec.size != int(np.prod(dims)):
            raise DimensionMismatchError("vector length does not match dims")
        t = vec.reshape(dims)
        out = np.tensordot(t, t.conj(), axes=(traced, traced))
        keep_dim = int(np.prod([dims[k] for k in keep])) if keep else 1
        return out.reshape(keep_dim, keep_dim)
    mat = _state_matrix(state)
    if mat.shape[0] != int(np.prod(dims)):
        raise DimensionMismatchError("matrix size does not match dims")
    t = mat.reshape(dims + dims)
    row = [chr(ord("a") + i) for i in range(n)]
    col = [chr(ord("a") + n + i) for i in range(n)]
    for ax in traced:
        col[ax] = row[ax]
    sub_out = "".join([row[k] for k in keep] + [col[k] for k in keep])
    out = np.einsum("".join(row + col) + "->" + sub_out, t)
    keep_dim = int(np.prod([dims[k] for k in keep])) if keep else 1
    return out.reshape(keep_dim, keep_dim)


def extend_channel(channel: QuantumChannel, ref_dim: int) -> QuantumChannel:
    """Channel acting as N on the first factor and identity on a reference."""
    eye = np.eye(ref_dim, dtype=np.complex128)
    return QuantumChannel([np.kron(op, eye) for op in channel.kraus])


def tensor_channels(a: QuantumChannel, b: QuantumChannel) -> QuantumChannel:
    """Tensor product channel with Kraus set {A_i x B_j}."""
    return QuantumChannel([np.kron(x, y) for x in a.kraus for y in b.kraus])


def quantum_mutual_information(channel: QuantumChannel, rho) -> float:
    """H(rho) + H(N(rho)) - H(E(rho)) in bits.

    This is the quantity whose maximum over input states is the
    entanglement-assisted classical capacity of the channel.
    """
    mat = _state_matrix(rho)
    return (von_neumann_entropy(mat)
            + von_neumann_entropy(_apply_raw(channel, mat))
            - von_neumann_entropy(_complementary_raw(channel, mat)))


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    a = _state_matrix(rho)
    b = _state_matrix(sigma)
    if a.shape != b.shape:
        raise DimensionMismatchError("fidelity operands must share a dimension")
    evals, vecs = np.linalg.eigh(a)
    evals = np.clip(evals, 0.0, None)
    sqrt_a = (vecs * np.sqrt(evals)) @ vecs.conj().T
    inner = np.linalg.eigvalsh(sqrt_a @ b @ sqrt_a)
    inner = np.clip(inner, 0.0, None)
    return float(np.sum(np.sqrt(inner)) ** 2)


def ssa_slack(rho_abc, dims) -> float:
    """Strong-subadditivity slack H(AB) + H(AC) - H(ABC) - H(A), >= 0."""
    dims = [int(d) for d in dims]
    if len(dims) != 3:
        raise DimensionMismatchError("ssa_slack expects three factors")
    mat = _state_matrix(rho_abc)
    h_abc = von_neumann_entropy(mat)
    h_ab = entropy_of_spectrum(np.linalg.eigvalsh(partial_trace(mat, dims, [0, 1])))
    h_ac = entropy_of_spectrum(np.linalg.eigvalsh(partial_trace(mat, dims, [0, 2])))
    h_a = entropy_of_spectrum(np.linalg.eigvalsh(partial_trace(mat, dims, [0])))
    return h_ab + h_ac - h_abc - h_a


# ---------------------------------------------------------------------------
# JSON wire format: complex matrices as nested [re, im] pairs, row-major.

def matrix_to_json(mat) -> list:
    arr = np.asarray(mat, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in arr]


def matrix_from_json(data) -> np.ndarray:
    try:
        rows = [[complex(cell[0], cell[1]) for cell in row] for row in data]
    except (TypeError, IndexError) as exc:
        raise ValueError(f"malformed complex-matrix JSON: {exc}") from exc
    arr = np.asarray(rows, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValueError("malformed complex-matrix JSON: not a 2-D array")
    return arr


def dump_matrix(mat) -> str:
    return json.dumps(matrix_to_json(mat))


def load_matrix(text: str) -> np.ndarray:
    return matrix_from_json(json.loads(text))
