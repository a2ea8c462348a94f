"""Numeric kernels with a numba loop path and a vectorized numpy path.

Words are handled in batch as ``int8`` code matrices: row ``r`` holds the
letters of one reduced word as signed generator indices (``+i`` for ``u_i``,
``-i`` for its inverse), right-padded with ``0``.  A separate ``lengths``
vector gives the true letter count of each row.

Every public kernel dispatches on :data:`freestates._backend.USE_NUMBA`; the
``*_loops`` and ``*_numpy`` implementations stay importable so the benchmark
and the backend-agreement tests can call both.
"""

import math

import numpy as np

from ._backend import USE_NUMBA, njit

CODE_DTYPE = np.int8


def letter_order(n):
    """Letters of rank ``n`` in enumeration order: u1, u1^-1, u2, u2^-1, ..."""
    out = np.empty(2 * n, dtype=CODE_DTYPE)
    out[0::2] = np.arange(1, n + 1)
    out[1::2] = -np.arange(1, n + 1)
    return out


def sphere_size(n, k):
    if k == 0:
        return 1
    return 2 * n * (2 * n - 1) ** (k - 1)


# ---------------------------------------------------------------------------
# sphere enumeration


@njit
def _sphere_codes_loops(n, k):
    count = 1
    if k > 0:
        count = 2 * n
        for _ in range(k - 1):
            count *= 2 * n - 1
    out = np.zeros((count, max(k, 1)), dtype=np.int8)
    if k == 0:
        return out[:, :0]
    letters = np.empty(2 * n, dtype=np.int8)
    for g in range(n):
        letters[2 * g] = g + 1
        letters[2 * g + 1] = -(g + 1)
    # depth-first fill keeps rows in lexicographic order
    idx = np.zeros(k, dtype=np.int64)
    word = np.zeros(k, dtype=np.int8)
    row = 0
    depth = 0
    while depth >= 0:
        if idx[depth] >= 2 * n:
            idx[depth] = 0
            depth -= 1
            if depth >= 0:
                idx[depth] += 1
            continue
        x = letters[idx[depth]]
        if depth > 0 and word[depth - 1] == -x:
            idx[depth] += 1
            continue
        word[depth] = x
        if depth == k - 1:
            out[row, :] = word
            row += 1
            idx[depth] += 1
        else:
            depth += 1
    return out


def _sphere_codes_numpy(n, k):
    if k == 0:
        return np.zeros((1, 0), dtype=CODE_DTYPE)
    letters = letter_order(n)
    codes = letters.reshape(-1, 1)
    for _ in range(k - 1):
        rows = np.repeat(codes, 2 * n, axis=0)
        nxt = np.tile(letters, codes.shape[0])
        keep = rows[:, -1] != -nxt
        codes = np.concatenate([rows[keep], nxt[keep, None]], axis=1)
    return codes.astype(CODE_DTYPE)


def sphere_codes(n, k):
    """All reduced words of length ``k`` over ``n`` generators, lexicographic."""
    if USE_NUMBA:
        return _sphere_codes_loops(n, k)
    return _sphere_codes_numpy(n, k)


# ---------------------------------------------------------------------------
# per-word statistics


@njit
def _word_stats_loops(codes, lengths):
    m = codes.shape[0]
    gamma = np.zeros(m, dtype=np.int64)
    u1 = np.zeros(m, dtype=np.int64)
    tau = np.zeros(m, dtype=np.int64)
    for r in range(m):
        L = lengths[r]
        g = 0
        c1 = 0
        t = 0
        for p in range(L):
            x = codes[r, p]
            if x > 0:
                t += 1
                if p > 0 and codes[r, p - 1] < 0:
                    g += 1
            else:
                t -= 1
            if x == 1 or x == -1:
                c1 += 1
        gamma[r] = g
        u1[r] = c1
        tau[r] = t
    return gamma, u1, tau


def _word_stats_numpy(codes, lengths):
    codes = np.asarray(codes)
    if codes.shape[1] == 0:
        z = np.zeros(codes.shape[0], dtype=np.int64)
        return z, z.copy(), z.copy()
    # padding is 0 so it never counts as a letter or a switch
    gamma = np.sum((codes[:, :-1] < 0) & (codes[:, 1:] > 0), axis=1).astype(np.int64)
    u1 = np.sum(np.abs(codes) == 1, axis=1).astype(np.int64)
    tau = np.sum(np.sign(codes), axis=1).astype(np.int64)
    return gamma, u1, tau


def word_stats(codes, lengths):
    """Return ``(gamma, u1_length, tau)`` arrays for a padded code matrix."""
    codes = np.ascontiguousarray(codes, dtype=CODE_DTYPE)
    lengths = np.ascontiguousarray(lengths, dtype=np.int64)
    if USE_NUMBA:
        return _word_stats_loops(codes, lengths)
    return _word_stats_numpy(codes, lengths)


# ---------------------------------------------------------------------------
# statistics of w_i^{-1} w_j for every ordered pair


@njit
def _pair_stats_loops(codes, lengths):
    m = codes.shape[0]
    length = np.zeros((m, m), dtype=np.int64)
    gamma = np.zeros((m, m), dtype=np.int64)
    u1 = np.zeros((m, m), dtype=np.int64)
    tau = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        li = lengths[i]
        for j in range(m):
            lj = lengths[j]
            c = 0
            while c < li and c < lj and codes[i, c] == codes[j, c]:
                c += 1
            g = 0
            c1 = 0
            t = 0
            prev = 0
            # inverse of the tail of w_i: reversed, signs flipped
            for p in range(li - 1, c - 1, -1):
                x = -codes[i, p]
                if x > 0:
                    t += 1
                    if prev < 0:
                        g += 1
                else:
                    t -= 1
                if x == 1 or x == -1:
                    c1 += 1
                prev = x
            for p in range(c, lj):
                x = codes[j, p]
                if x > 0:
                    t += 1
                    if prev < 0:
                        g += 1
                else:
                    t -= 1
                if x == 1 or x == -1:
                    c1 += 1
                prev = x
            length[i, j] = li + lj - 2 * c
            gamma[i, j] = g
            u1[i, j] = c1
            tau[i, j] = t
    return length, gamma, u1, tau


def _pair_stats_numpy(codes, lengths):
    codes = np.asarray(codes, dtype=np.int64)
    lengths = np.asarray(lengths, dtype=np.int64)
    m, L = codes.shape
    if L == 0:
        z = np.zeros((m, m), dtype=np.int64)
        return z, z.copy(), z.copy(), z.copy()
    eq = codes[:, None, :] == codes[None, :, :]
    valid = np.arange(L)[None, None, :] < np.minimum(lengths[:, None], lengths[None, :])[:, :, None]
    c = np.sum(np.cumprod(eq & valid, axis=2), axis=2)
    li = lengths[:, None] - c
    lj = lengths[None, :] - c
    length = li + lj
    # materialize inv(tail_i) ++ tail_j, padded with 0 to 2L
    p = np.arange(2 * L)[None, None, :]
    first = p < li[:, :, None]
    src_i = np.clip(lengths[:, None, None] - 1 - p, 0, L - 1)
    part_i = -np.take_along_axis(np.broadcast_to(codes[:, None, :], (m, m, L)), np.broadcast_to(src_i, (m, m, 2 * L)), axis=2)
    src_j = np.clip(c[:, :, None] + p - li[:, :, None], 0, L - 1)
    part_j = np.take_along_axis(np.broadcast_to(codes[None, :, :], (m, m, L)), src_j, axis=2)
    seq = np.where(first, part_i, np.where(p < length[:, :, None], part_j, 0))
    gamma = np.sum((seq[:, :, :-1] < 0) & (seq[:, :, 1:] > 0), axis=2)
    u1 = np.sum(np.abs(seq) == 1, axis=2)
    tau = np.sum(np.sign(seq), axis=2)
    return length, gamma.astype(np.int64), u1.astype(np.int64), tau.astype(np.int64)


def pair_stats(codes, lengths):
    """Statistics ``(length, gamma, u1_length, tau)`` of ``w_i^{-1} w_j``."""
    codes = np.ascontiguousarray(codes, dtype=CODE_DTYPE)
    lengths = np.ascontiguousarray(lengths, dtype=np.int64)
    if USE_NUMBA:
        return _pair_stats_loops(codes, lengths)
    return _pair_stats_numpy(codes, lengths)


# ---------------------------------------------------------------------------
# cyclic Jacobi eigensolver for real symmetric matrices


@njit
def _jacobi_loops(a, rel_tol, max_sweeps):
    m = a.shape[0]
    A = a.copy()
    V = np.eye(m)
    scale = 0.0
    for i in range(m):
        for j in range(m):
            scale += A[i, j] * A[i, j]
    scale = math.sqrt(scale)
    sweeps = 0
    while sweeps < max_sweeps:
        off = 0.0
        for i in range(m):
            for j in range(m):
                if i != j:
                    off += A[i, j] * A[i, j]
        if math.sqrt(off) <= rel_tol * scale:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.hypot(theta, 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for r in range(m):
                    arp = A[r, p]
                    arq = A[r, q]
                    A[r, p] = c * arp - s * arq
                    A[r, q] = s * arp + c * arq
                for r in range(m):
                    apr = A[p, r]
                    aqr = A[q, r]
                    A[p, r] = c * apr - s * aqr
                    A[q, r] = s * apr + c * aqr
                A[p, q] = 0.0
                A[q, p] = 0.0
                for r in range(m):
                    vrp = V[r, p]
                    vrq = V[r, q]
                    V[r, p] = c * vrp - s * vrq
                    V[r, q] = s * vrp + c * vrq
        sweeps += 1
    w = np.empty(m)
    for i in range(m):
        w[i] = A[i, i]
    return w, V, sweeps


def _round_robin(m):
    """Disjoint (p, q) pairings covering every pair once per sweep."""
    size = m + (m % 2)
    players = list(range(size))
    rounds = []
    for _ in range(size - 1):
        pairs = [(players[k], players[size - 1 - k]) for k in range(size // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < m and q < m]
        if pairs:
            arr = np.array(pairs, dtype=np.int64)
            rounds.append((arr[:, 0], arr[:, 1]))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _jacobi_numpy(a, rel_tol, max_sweeps):
    A = np.array(a, dtype=np.float64, copy=True)
    m = A.shape[0]
    V = np.eye(m)
    scale = np.linalg.norm(A)
    rounds = _round_robin(m)
    sweeps = 0
    while sweeps < max_sweeps:
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= rel_tol * scale:
            break
        for P, Q in rounds:
            apq = A[P, Q]
            nz = apq != 0.0
            if not np.any(nz):
                continue
            safe = np.where(nz, apq, 1.0)
            theta = (A[Q, Q] - A[P, P]) / (2.0 * safe)
            t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t = np.where(theta == 0.0, 1.0, t)
            t = np.where(nz, t, 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            colp = A[:, P].copy()
            colq = A[:, Q]
            A[:, P] = c * colp - s * colq
            A[:, Q] = s * colp + c * colq
            rowp = A[P, :].copy()
            rowq = A[Q, :]
            A[P, :] = c[:, None] * rowp - s[:, None] * rowq
            A[Q, :] = s[:, None] * rowp + c[:, None] * rowq
            A[P, Q] = 0.0
            A[Q, P] = 0.0
            vp = V[:, P].copy()
            vq = V[:, Q]
            V[:, P] = c * vp - s * vq
            V[:, Q] = s * vp + c * vq
        sweeps += 1
    return np.diag(A).copy(), V, sweeps


def jacobi_eigh(a, rel_tol=1e-14, max_sweeps=100):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors, sweeps)`` with eigenvalues ascending
    and eigenvectors as columns.  Convergence is declared once the
    off-diagonal Frobenius mass drops below ``rel_tol * ||a||_F``.
    """
    a = np.ascontiguousarray(a, dtype=np.float64)
    if a.shape[0] == 0:
        return np.zeros(0), np.zeros((0, 0)), 0
    if USE_NUMBA:
        w, V, sweeps = _jacobi_loops(a, rel_tol, max_sweeps)
    else:
        w, V, sweeps = _jacobi_numpy(a, rel_tol, max_sweeps)
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order], int(sweeps)


def realify(h):
    """Real symmetric embedding [[Re, -Im], [Im, Re]] of a Hermitian matrix."""
    h = np.asarray(h)
    re = h.real
    im = h.imag
    return np.block([[re, -im], [im, re]])


# ---------------------------------------------------------------------------
# boundary cylinders


@njit
def _cylinder_masses_loops(codes, a_plus, a_minus, a0, a1):
    m, d = codes.shape
    out = np.ones(m)
    for r in range(m):
        if d == 0:
            continue
        w = a_plus if codes[r, 0] > 0 else a_minus
        for p in range(1, d):
            if (codes[r, p] > 0) != (codes[r, p - 1] > 0):
                w *= a1
            else:
                w *= a0
        out[r] = w
    return out


def _cylinder_masses_numpy(codes, a_plus, a_minus, a0, a1):
    codes = np.asarray(codes)
    m, d = codes.shape
    if d == 0:
        return np.ones(m)
    first = np.where(codes[:, 0] > 0, a_plus, a_minus)
    pos = codes > 0
    switches = np.sum(pos[:, 1:] != pos[:, :-1], axis=1)
    stays = (d - 1) - switches
    return first * a1 ** switches * a0 ** stays


def cylinder_masses(codes, a_plus, a_minus, a0, a1):
    """mu(Omega(w)) for each full-length row ``w`` of ``codes``."""
    codes = np.ascontiguousarray(codes, dtype=CODE_DTYPE)
    if USE_NUMBA:
        return _cylinder_masses_loops(codes, a_plus, a_minus, a0, a1)
    return _cylinder_masses_numpy(codes, a_plus, a_minus, a0, a1)


@njit
def _cocycle_loops(s, codes, n, lam):
    """P(s, w) for each cylinder row; -1.0 marks an undetermined branch as nan."""
    m, d = codes.shape
    L = s.shape[0]
    other = (lam - n / lam) / (n - 1)
    out = np.ones(m)
    for r in range(m):
        val = 1.0
        c = 0  # common prefix of s[:i] and w
        for i in range(L):
            # first two letters of (s[:i])^{-1} w
            if c < i and c == d:
                val = np.nan
                break
            if c < i:
                e0 = -s[i - 1]
                if c < i - 1:
                    e1 = -s[i - 2]
                elif c < d:
                    e1 = codes[r, c]
                else:
                    e1 = 0
            else:
                e0 = codes[r, c] if c < d else 0
                e1 = codes[r, c + 1] if c + 1 < d else 0
            x = s[i]
            j = x if x > 0 else -x
            if x > 0:
                if e0 == 0:
                    val = np.nan
                    break
                if e0 == j:
                    val *= n / lam
                elif e0 > 0:
                    val *= other
                else:
                    val *= lam / n
            else:
                if e0 == 0:
                    val = np.nan
                    break
                if e0 == -j:
                    # u_j * eta cancels: p_j is read off the second letter
                    if e1 == 0:
                        val = np.nan
                        break
                    if e1 > 0:
                        val /= other
                    else:
                        val *= n / lam
                else:
                    val *= lam / n
            # extend the common prefix for s[:i+1]
            if c == i and c < d and codes[r, c] == x:
                c += 1
        out[r] = val
    return out


def _cocycle_numpy(s, codes, n, lam):
    codes = np.asarray(codes, dtype=np.int64)
    s = np.asarray(s, dtype=np.int64)
    m, d = codes.shape
    other = (lam - n / lam) / (n - 1)
    val = np.ones(m)
    c = np.zeros(m, dtype=np.int64)
    padded = np.concatenate([codes, np.zeros((m, 2), dtype=np.int64)], axis=1)
    rows = np.arange(m)
    for i in range(len(s)):
        inside = c == i
        e0_in = padded[rows, c]
        e1_in = padded[rows, c + 1]
        e0_out = -s[i - 1] if i > 0 else 0
        if i >= 2:
            e1_out = np.where(c < i - 1, -s[i - 2], padded[rows, c])
        else:
            e1_out = padded[rows, c]
        e0 = np.where(inside, e0_in, e0_out)
        e0 = np.where(~inside & (c == d), 0, e0)
        e1 = np.where(inside, e1_in, e1_out)
        x = s[i]
        j = abs(x)
        if x > 0:
            fac = np.where(e0 == j, n / lam, np.where(e0 > 0, other, lam / n))
            fac = np.where(e0 == 0, np.nan, fac)
        else:
            second = np.where(e1 > 0, 1.0 / other, n / lam)
            second = np.where(e1 == 0, np.nan, second)
            fac = np.where(e0 == -j, second, lam / n)
            fac = np.where(e0 == 0, np.nan, fac)
        val = val * fac
        c = np.where(inside & (padded[rows, np.minimum(c, d)] == x) & (c < d), c + 1, c)
    return val


def cocycle_on_cylinders(s_code, codes, n, lam):
    """Cocycle P(s, .) evaluated on each cylinder row (nan where undetermined)."""
    s_code = np.ascontiguousarray(s_code, dtype=CODE_DTYPE)
    codes = np.ascontiguousarray(codes, dtype=CODE_DTYPE)
    if USE_NUMBA:
        return _cocycle_loops(s_code, codes, float(n), float(lam))
    return _cocycle_numpy(s_code, codes, float(n), float(lam))
