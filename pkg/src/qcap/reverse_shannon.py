"""Exact simulation of a noisy classical channel over a noiseless one.

A sender and receiver holding shared randomness can make a noiseless bit
pipe behave exactly like n uses of a discrete memoryless channel, spending
asymptotically only n times the channel capacity in bits. Both parties
derive a large random codeword set from the shared seed; the sender picks
a set member matching the statistics of a privately simulated channel
output and transmits its index, falling back to the raw output when no
member matches. The substitution is distribution-preserving at every
block length, not just asymptotically.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox
from scipy.stats import chisquare

from .typeclasses import TypeClass, joint_type, sample_from_type, type_of

BA_MAX_ITERS = 10 ** 6
MAX_SET_EXPONENT = 26.0  # sets beyond ~6.7e7 members are not scannable here
ORACLE_MAX_COMBOS = 10 ** 7
_SCAN_CHUNK = 1 << 20  # words per streamed Z block; multiple of 4


class DMC:
    """Discrete memoryless channel: row-stochastic transition table.

    Row x holds the output distribution P(y | input x).
    """

    def __init__(self, matrix):
        mat = np.array(matrix, dtype=np.float64)
        if mat.ndim != 2 or mat.size == 0:
            raise ValueError("transition matrix must be 2-d and nonempty")
        if np.any(mat < -1e-12) or np.any(mat > 1.0 + 1e-12):
            raise ValueError("transition probabilities must lie in [0, 1]")
        rows = mat.sum(axis=1)
        if np.any(np.abs(rows - 1.0) > 1e-12):
            raise ValueError(f"rows must sum to 1, got sums {rows}")
        mat = np.clip(mat, 0.0, 1.0)
        mat.setflags(write=False)
        self.matrix = mat
        self._cum = np.cumsum(mat, axis=1)

    @property
    def d_in(self) -> int:
        return self.matrix.shape[0]

    @property
    def d_out(self) -> int:
        return self.matrix.shape[1]

    def sample_outputs(self, x: np.ndarray, rng: Generator) -> np.ndarray:
        """One channel use per letter of x, consuming len(x) uniforms."""
        u = rng.random(len(x))
        cum = self._cum[x]
        return (u[:, None] > cum).sum(axis=1).astype(np.int64)

    def block_probability(self, x, y) -> float:
        """Probability of output block y given input block x."""
        return float(np.prod(self.matrix[np.asarray(x), np.asarray(y)]))

    def to_json(self) -> dict:
        return {"matrix": [[float(v) for v in row] for row in self.matrix]}

    @classmethod
    def from_json(cls, obj: dict) -> "DMC":
        return cls(obj["matrix"])


def bsc(p: float) -> DMC:
    """Binary symmetric channel flipping each bit with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"flip probability must be in [0, 1], got {p}")
    return DMC([[1.0 - p, p], [p, 1.0 - p]])


def _h2(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def bsc_capacity(p: float) -> float:
    return 1.0 - _h2(p)


def ba_capacity(dmc: DMC, tol: float = 1e-10):
    """Channel capacity in bits with the achieving input distribution.

    Alternating fixed-point iteration; at each step the bracket
    [I(q), max_x D(row_x || q N)] pins the capacity, and iteration stops
    when it is narrower than tol.
    """
    mat = dmc.matrix
    with np.errstate(divide="ignore", invalid="ignore"):
        nlogn = np.where(mat > 0.0, mat * np.log2(np.where(mat > 0.0, mat, 1.0)), 0.0)
    row_neg_ent = nlogn.sum(axis=1)
    q = np.full(dmc.d_in, 1.0 / dmc.d_in)
    for _ in range(BA_MAX_ITERS):
        out = q @ mat
        with np.errstate(divide="ignore"):
            log_out = np.where(out > 0.0, np.log2(np.where(out > 0.0, out, 1.0)), 0.0)
        # D(row_x || qN) in bits; rows put no mass on zero-probability outputs
        div = row_neg_ent - mat @ log_out
        lower = float(q @ div)
        upper = float(div.max())
        if upper - lower <= tol:
            return lower, q
        q = q * np.exp2(div - div.max())
        q /= q.sum()
    raise RuntimeError(f"no convergence within {BA_MAX_ITERS} iterations")


def constrained_mi(dmc: DMC, q) -> float:
    """Single-letter mutual information I(q, N) in bits."""
    q = np.asarray(q, dtype=np.float64)
    if q.ndim != 1 or q.size != dmc.d_in:
        raise ValueError(f"input distribution must have length {dmc.d_in}")
    if np.any(q < -1e-12) or abs(float(q.sum()) - 1.0) > 1e-9:
        raise ValueError("input distribution must be nonnegative and sum to 1")
    q = np.clip(q, 0.0, None)
    mat = dmc.matrix
    out = q @ mat
    total = 0.0
    for x in range(dmc.d_in):
        if q[x] <= 0.0:
            continue
        row = mat[x]
        mask = row > 0.0
        total += q[x] * float(np.sum(row[mask] * np.log2(row[mask] / out[mask])))
    return max(total, 0.0)


@dataclass(frozen=True)
class ProtocolConfig:
    n: int
    eps: float
    variant: str = "bsc"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"block length must be >= 1, got {self.n}")
        if self.eps <= 0.0:
            raise ValueError(f"slack must be > 0, got {self.eps}")
        if self.variant not in ("bsc", "general"):
            raise ValueError(f"unknown variant {self.variant!r}")


@dataclass
class Transcript:
    """Everything the sender put on the wire for one block.

    index_bits is the payload width after the direction prefix: the
    codeword-index width on the index path, the raw-output width on the
    fallback path, so bits_sent = itc_bits + 1 + index_bits either way.
    """

    bits_sent: int
    fallback: bool
    itc_bits: int
    index_bits: int
    output: tuple
    message: str

    def to_json(self) -> dict:
        return {
            "bits_sent": self.bits_sent,
            "fallback": self.fallback,
            "itc_bits": self.itc_bits,
            "index_bits": self.index_bits,
            "output": list(self.output),
            "message": self.message,
        }


@dataclass(frozen=True)
class SharedRandomness:
    """Seed both parties hold; all randomness is derived, never stored.

    Streams are keyed by hashing (seed, tag, indices) into a counter-based
    generator, so the receiver can regenerate any single set element in
    O(1) without replaying the sender's scan.
    """

    seed: int

    def __post_init__(self):
        object.__setattr__(self, "seed", int(self.seed) & (2 ** 64 - 1))

    def _key(self, tag: str, *idx) -> np.ndarray:
        label = f"{self.seed}|{tag}|" + ",".join(str(int(i)) for i in idx)
        h = hashlib.sha256(label.encode("ascii")).digest()
        return np.frombuffer(h[:16], dtype=np.uint64).copy()

    def bitgen(self, tag: str, *idx) -> Philox:
        return Philox(key=self._key(tag, *idx))

    def stream(self, tag: str, *idx) -> Generator:
        return Generator(self.bitgen(tag, *idx))

    def element_stream(self, tag: str, k: int, i: int) -> Generator:
        # key word 0 names the set, word 1 is the element index: any
        # element is reachable without generating its predecessors
        key = self._key(tag, k)
        key[1] = np.uint64(i)
        return Generator(Philox(key=key))

    def derive(self, tag: str, *idx) -> "SharedRandomness":
        key = self._key(tag, *idx)
        return SharedRandomness(int(key[0]))


def _set_size(rate_bits: float, n: int, eps: float) -> int:
    exponent = n * (rate_bits + eps / 2.0)
    if exponent > MAX_SET_EXPONENT:
        raise ValueError(
            f"codeword set of 2^{exponent:.1f} elements exceeds the simulation budget")
    return max(math.ceil(2.0 ** exponent), 1)


def _index_width(size: int) -> int:
    # == ceil(log2(size)) for size >= 1, computed exactly
    return (size - 1).bit_length()


def _bits_to_int(bits: np.ndarray) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


def _letters_array(x, d: int, n: int) -> np.ndarray:
    if isinstance(x, str):
        arr = np.array([int(ch) for ch in x], dtype=np.int64)
    else:
        arr = np.asarray(x, dtype=np.int64)
    if arr.ndim != 1 or len(arr) != n:
        raise ValueError(f"input block must have length {n}")
    if arr.size and (arr.min() < 0 or arr.max() >= d):
        raise ValueError(f"letters must lie in [0, {d})")
    return arr


def _regen_bsc_word(shared: SharedRandomness, index: int) -> int:
    # element i is word i of the raw stream: 4 words per counter block
    bg = shared.bitgen("Z")
    bg.advance(index // 4)
    return int(bg.random_raw(4)[index % 4])


def bsc_simulate(p: float, cfg: ProtocolConfig, shared: SharedRandomness, x):
    """One protocol run over the binary symmetric channel.

    The shared set Z holds ceil(2^(n(C+eps/2))) uniform n-bit strings,
    materialized as consecutive 64-bit words of one keyed stream. The
    sender privately simulates the channel, then transmits either
    (prefix 0, index of a uniformly chosen set member at the same
    Hamming distance from x) or (prefix 1, the raw simulated output).
    Swapping the simulated output for an equidistant set member leaves
    the output distribution exactly BSC(p)^n because the channel law is
    constant on each Hamming shell and set members are exchangeable.

    Returns (receiver's output block, Transcript).
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"flip probability must be in (0, 1), got {p}")
    n = cfg.n
    if n > 64:
        raise ValueError("bit blocks above 64 are not supported")
    xs = _letters_array(x, 2, n)
    x_word = np.uint64(_bits_to_int(xs))
    mask = np.uint64((1 << n) - 1)

    size = _set_size(bsc_capacity(p), n, cfg.eps)
    width = _index_width(size)

    priv = shared.stream("private")
    flips = priv.random(n) < p
    y = (xs ^ flips).astype(np.int64)
    dist = int(flips.sum())

    # stream over Z in chunks, collecting indices on the distance-d shell
    matches = []
    bg = shared.bitgen("Z")
    offset = 0
    while offset < size:
        m = min(_SCAN_CHUNK, ((size - offset + 3) // 4) * 4)
        words = (bg.random_raw(m) & mask).astype(np.uint64)
        hits = np.flatnonzero(np.bitwise_count(words ^ x_word) == dist)
        hits = hits[hits + offset < size]
        if hits.size:
            matches.append(hits.astype(np.int64) + offset)
        offset += m

    if matches:
        pool = np.concatenate(matches)
        chosen = int(pool[priv.integers(pool.size)])
        word = _regen_bsc_word(shared, chosen) & int(mask)
        y_out = np.array([(word >> (n - 1 - j)) & 1 for j in range(n)],
                         dtype=np.int64)
        message = "0" + format(chosen, f"0{width}b") if width else "0"
        tr = Transcript(bits_sent=1 + width, fallback=False, itc_bits=0,
                        index_bits=width, output=tuple(int(v) for v in y_out),
                        message=message)
    else:
        y_out = y
        message = "1" + "".join(str(int(b)) for b in y)
        tr = Transcript(bits_sent=1 + n, fallback=True, itc_bits=0,
                        index_bits=n, output=tuple(int(v) for v in y_out),
                        message=message)
    return y_out, tr


def _type_rank(counts: tuple) -> int:
    """Position of a letter-count vector in first-count-descending order."""
    rank = 0
    n = sum(counts)
    d = len(counts)
    for j, c in enumerate(counts[:-1]):
        slots = d - j - 1
        for v in range(n, c, -1):
            rank += math.comb(n - v + slots - 1, slots - 1)
        n -= c
    return rank


def _regen_dmc_element(dmc: DMC, shared: SharedRandomness, tc: TypeClass,
                       k: int, i: int) -> np.ndarray:
    xp = sample_from_type(tc, shared.element_stream("X", k, i))
    return dmc.sample_outputs(xp, shared.element_stream("Y", k, i))


def dmc_simulate(dmc: DMC, cfg: ProtocolConfig, shared: SharedRandomness, x):
    """One protocol run over a general discrete memoryless channel.

    The sender announces the letter-frequency class of x (its index among
    all count vectors, fixed width), then plays the set-substitution game
    within that class: the shared set holds outputs of the channel fed
    with uniform inputs of the same class, one independent keyed stream
    per element, and a set member replaces the privately simulated output
    when their pair-count matrices against x agree. The block transition
    law is constant on each such pair class, so the swap is exact.

    Returns (receiver's output block, Transcript).
    """
    n = cfg.n
    xs = _letters_array(x, dmc.d_in, n)
    tc = type_of(xs, dmc.d_in)
    k = _type_rank(tc.counts)
    k_total = math.comb(n + dmc.d_in - 1, dmc.d_in - 1)
    itc_bits = _index_width(k_total)

    rate = constrained_mi(dmc, np.asarray(tc.counts, dtype=np.float64) / n)
    size = _set_size(rate, n, cfg.eps)
    width = _index_width(size)

    priv = shared.stream("private")
    y = dmc.sample_outputs(xs, priv)
    # pair-count match done on flat bincounts; equals joint-type equality
    n_pair = dmc.d_in * dmc.d_out
    target = np.bincount(xs * dmc.d_out + y, minlength=n_pair)

    matches = []
    for i in range(size):
        cand = _regen_dmc_element(dmc, shared, tc, k, i)
        pair = np.bincount(xs * dmc.d_out + cand, minlength=n_pair)
        if np.array_equal(pair, target):
            matches.append(i)

    itc_msg = format(k, f"0{itc_bits}b") if itc_bits else ""
    if matches:
        chosen = matches[int(priv.integers(len(matches)))]
        y_out = _regen_dmc_element(dmc, shared, tc, k, chosen)
        message = itc_msg + ("0" + format(chosen, f"0{width}b") if width else "0")
        tr = Transcript(bits_sent=itc_bits + 1 + width, fallback=False,
                        itc_bits=itc_bits, index_bits=width,
                        output=tuple(int(v) for v in y_out), message=message)
    else:
        y_out = y
        # raw path sends y as one base-d_out integer, big-endian letters
        raw_bits = _index_width(dmc.d_out ** n)
        val = 0
        for v in y:
            val = val * dmc.d_out + int(v)
        message = itc_msg + "1" + (format(val, f"0{raw_bits}b") if raw_bits else "")
        tr = Transcript(bits_sent=itc_bits + 1 + raw_bits, fallback=True,
                        itc_bits=itc_bits, index_bits=raw_bits,
                        output=tuple(int(v) for v in y_out), message=message)
    return y_out, tr


# ---------------------------------------------------------------------------
# Faithfulness verification.

def _block_outputs(d_out: int, n: int) -> np.ndarray:
    """All length-n output blocks, last letter fastest."""
    grids = np.meshgrid(*([np.arange(d_out)] * n), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _block_matrix(dmc: DMC, n: int) -> np.ndarray:
    """(N^n)_{xy} for all input/output blocks, both block-indexed."""
    out = np.ones((dmc.d_in ** n, dmc.d_out ** n))
    xin = _block_outputs(dmc.d_in, n)
    yout = _block_outputs(dmc.d_out, n)
    for xi, xb in enumerate(xin):
        for yi, yb in enumerate(yout):
            out[xi, yi] = dmc.block_probability(xb, yb)
    return out


def exact_faithfulness_oracle(channel, n: int, eps: float | None = None,
                              zsize: int | None = None) -> float:
    """Max deviation of the induced block channel from the true one.

    Integrates the protocol analytically: every ordered draw of the
    shared set, every private channel outcome, every uniform pick among
    matching members, weighted by its probability. channel is a flip
    probability (bit protocol) or a DMC (general protocol). The set size
    comes from zsize, or from eps via the protocol's own sizing rule.
    Refuses enumerations beyond ORACLE_MAX_COMBOS weight terms.
    """
    if zsize is None and eps is None:
        raise ValueError("need either eps or an explicit set size")
    is_bsc = not isinstance(channel, DMC)
    dmc = bsc(float(channel)) if is_bsc else channel
    d_i, d_o = dmc.d_in, dmc.d_out
    yout = _block_outputs(d_o, n)
    n_out = len(yout)
    true_block = _block_matrix(dmc, n)
    worst = 0.0

    xin = _block_outputs(d_i, n)
    for xi, xb in enumerate(xin):
        if is_bsc:
            size = zsize if zsize is not None else _set_size(
                bsc_capacity(float(channel)), n, eps)
            member_probs = np.full(n_out, 1.0 / n_out)
        else:
            tc = type_of(xb, d_i)
            rate = constrained_mi(dmc, np.asarray(tc.counts, float) / n)
            size = zsize if zsize is not None else _set_size(rate, n, eps)
            # set members: channel outputs of a uniform same-class input
            member_probs = np.zeros(n_out)
            class_inputs = [xc for xc in xin
                            if type_of(xc, d_i).counts == tc.counts]
            for xc in class_inputs:
                xci = int(np.ravel_multi_index(tuple(xc), (d_i,) * n))
                member_probs += true_block[xci]
            member_probs /= len(class_inputs)

        if (n_out ** size) * n_out > ORACLE_MAX_COMBOS:
            raise ValueError(
                f"{n_out}^{size} set draws exceed the enumeration guard")

        if is_bsc:
            labels = [int((yb != xb).sum()) for yb in yout]
        else:
            labels = [joint_type(xb, yb, d_i, d_o).key() for yb in yout]
        ids = {}
        sig = np.array([ids.setdefault(s, len(ids)) for s in labels])

        # extended-precision accumulator: millions of ordered draws would
        # otherwise pile up ~1e-12 of float64 rounding in each bucket
        induced = np.zeros(n_out, dtype=np.longdouble)
        for draw in np.ndindex(*([n_out] * size)):
            w_draw = float(np.prod(member_probs[list(draw)]))
            if w_draw == 0.0:
                continue
            draw_sigs = sig[list(draw)]
            for yi in range(n_out):
                w = w_draw * true_block[xi, yi]
                if w == 0.0:
                    continue
                hits = np.flatnonzero(draw_sigs == sig[yi])
                if hits.size:
                    share = w / hits.size
                    for h in hits:
                        induced[draw[h]] += share
                else:
                    induced[yi] += w
        diff = induced.astype(np.float64) - true_block[xi]
        worst = max(worst, float(np.max(np.abs(diff))))
    return worst


def _exact_block_distribution(dmc: DMC, xs: np.ndarray) -> np.ndarray:
    probs = np.array([1.0])
    for letter in xs:
        probs = np.multiply.outer(probs, dmc.matrix[letter]).ravel()
    return probs


def empirical_faithfulness(channel, cfg: ProtocolConfig, trials: int,
                           seed: int, x=None) -> dict:
    """Monte-Carlo output histogram for one fixed input vs the exact law.

    Returns the total-variation estimate and a chi-square p-value
    (expected bins below 5 are pooled). Each trial reseeds the whole
    protocol, so trial outputs are independent draws of the block law.
    """
    if trials < 1000:
        raise ValueError("need at least 1000 trials for a stable histogram")
    is_bsc = not isinstance(channel, DMC)
    dmc = bsc(float(channel)) if is_bsc else channel
    n = cfg.n
    if dmc.d_out ** n > 10 ** 4:
        raise ValueError("output space too large to bin")
    xs = (_letters_array(x, dmc.d_in, n) if x is not None
          else np.zeros(n, dtype=np.int64))
    exact = _exact_block_distribution(dmc, xs)

    base = SharedRandomness(seed)
    hist = np.zeros(dmc.d_out ** n, dtype=np.int64)
    radix = dmc.d_out ** np.arange(n - 1, -1, -1)
    for t in range(trials):
        shared = base.derive("trial", t)
        if is_bsc:
            y_out, _ = bsc_simulate(float(channel), cfg, shared, xs)
        else:
            y_out, _ = dmc_simulate(dmc, cfg, shared, xs)
        hist[int(np.dot(y_out, radix))] += 1

    tv = 0.5 * float(np.abs(hist / trials - exact).sum())
    expected = exact * trials
    big = expected >= 5.0
    obs = np.append(hist[big], hist[~big].sum())
    exp = np.append(expected[big], expected[~big].sum())
    keep = exp > 0.0
    stat, pvalue = chisquare(obs[keep], exp[keep] * obs[keep].sum() / exp[keep].sum())
    return {"tv_estimate": tv, "chi2_pvalue": float(pvalue),
            "chi2_stat": float(stat), "bins": int(keep.sum()), "trials": trials}


def cost_statistics(channel, cfg: ProtocolConfig, trials: int, source,
                    seed: int) -> dict:
    """Monte-Carlo communication-cost statistics for a protocol setup.

    source is ("fixed", block), ("iid", letter distribution) or
    ("itc-uniform", letter counts). Reports mean bits per symbol, the
    rate of blocks costing more than n(C+eps), and the fallback rate,
    each with a standard error.
    """
    is_bsc = not isinstance(channel, DMC)
    dmc = bsc(float(channel)) if is_bsc else channel
    n = cfg.n
    cap = bsc_capacity(float(channel)) if is_bsc else ba_capacity(dmc, 1e-10)[0]
    threshold = n * (cap + cfg.eps)

    kind, arg = source
    if kind == "fixed":
        fixed = _letters_array(arg, dmc.d_in, n)
    elif kind == "iid":
        q = np.asarray(arg, dtype=np.float64)
        if q.ndim != 1 or q.size != dmc.d_in or abs(q.sum() - 1.0) > 1e-9:
            raise ValueError("iid source needs a distribution over the input alphabet")
        qcum = np.cumsum(q)
    elif kind == "itc-uniform":
        tc = TypeClass(tuple(arg))
        if tc.n != n or tc.d != dmc.d_in:
            raise ValueError("type counts must sum to n over the input alphabet")
    else:
        raise ValueError(f"unknown source kind {kind!r}")

    base = SharedRandomness(seed)
    bits = np.empty(trials)
    exceed = np.empty(trials, dtype=bool)
    fell = np.empty(trials, dtype=bool)
    itc_bits = 0
    for t in range(trials):
        shared = base.derive("trial", t)
        if kind == "fixed":
            xs = fixed
        elif kind == "iid":
            u = base.stream("input", t).random(n)
            xs = np.searchsorted(qcum, u).astype(np.int64)
        else:
            xs = sample_from_type(tc, base.stream("input", t))
        if is_bsc:
            _, tr = bsc_simulate(float(channel), cfg, shared, xs)
        else:
            _, tr = dmc_simulate(dmc, cfg, shared, xs)
        bits[t] = tr.bits_sent
        exceed[t] = tr.bits_sent > threshold
        fell[t] = tr.fallback
        itc_bits = tr.itc_bits

    mean_bits = float(bits.mean()) / n
    sem_bits = float(bits.std(ddof=1)) / n / math.sqrt(trials)
    p_exc = float(exceed.mean())
    p_fb = float(fell.mean())
    return {
        "n": n, "eps": cfg.eps, "capacity": cap, "trials": trials,
        "mean_bits_per_symbol": mean_bits, "mean_bits_se": sem_bits,
        "p_exceed": p_exc,
        "p_exceed_se": math.sqrt(max(p_exc * (1 - p_exc), 0.0) / trials),
        "fallback_rate": p_fb,
        "fallback_rate_se": math.sqrt(max(p_fb * (1 - p_fb), 0.0) / trials),
        "itc_bits": itc_bits,
    }
