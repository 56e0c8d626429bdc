"""Internal exact linear algebra kernels.

Two regimes back the cohomology engine:

* sparse elimination over Z with per-row moduli, for free or general
  torsion coefficients (arbitrary-precision integers, dict-of-row
  columns);
* dense row reduction over a prime field, vectorized with numpy int64
  (entries stay reduced modulo p, so the arithmetic is exact).
"""

from __future__ import annotations

from math import gcd
from typing import Optional, Sequence

import numpy as np


def extgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with g = gcd(a, b) = a*x + b*y and g >= 0."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def _lin_comb(c1: dict[int, int], f1: int, c2: dict[int, int], f2: int) -> dict[int, int]:
    """f1*c1 + f2*c2 as a sparse column."""
    out = {}
    if f1:
        for k, v in c1.items():
            out[k] = f1 * v
    if f2:
        for k, v in c2.items():
            w = out.get(k, 0) + f2 * v
            if w:
                out[k] = w
            elif k in out:
                del out[k]
    return out


def _scaled(c: dict[int, int], f: int) -> dict[int, int]:
    return {k: f * v for k, v in c.items()}


def kernel_with_row_orders(
    columns: Sequence[dict[int, int]],
    nrows: int,
    row_orders: Sequence[int],
) -> list[dict[int, int]]:
    """Basis of {x : sum_j x_j * col_j = 0 in the target with row moduli}.

    Row i of the target carries modulus ``row_orders[i]``; modulus 0
    means the row constraint is exact over Z.  The result is a list of
    sparse vectors over the column index space, forming a basis of the
    solution lattice.
    """
    ws: dict[int, dict[int, int]] = {j: dict(c) for j, c in enumerate(columns)}
    ts: dict[int, dict[int, int]] = {j: {j: 1} for j in range(len(columns))}

    for row in range(nrows):
        r = row_orders[row]
        cands = []
        for j, w in ws.items():
            v = w.get(row, 0)
            if v and r:
                v %= r
                if v > r - v:
                    v -= r
                if v:
                    w[row] = v
                else:
                    del w[row]
            if v:
                cands.append(j)
        if not cands:
            continue
        # prefer small pivot values, then sparse columns, to limit fill-in
        cands.sort(key=lambda j: (abs(ws[j][row]), len(ws[j]) + len(ts[j])))
        piv = cands[0]
        for j in cands[1:]:
            a = ws[piv][row]
            b = ws[j][row]
            if b % a == 0:
                q = b // a
                ws[j] = _lin_comb(ws[j], 1, ws[piv], -q)
                ts[j] = _lin_comb(ts[j], 1, ts[piv], -q)
            else:
                g, x, y = extgcd(a, b)
                wp, wj = ws[piv], ws[j]
                tp, tj = ts[piv], ts[j]
                ws[piv] = _lin_comb(wp, x, wj, y)
                ts[piv] = _lin_comb(tp, x, tj, y)
                ws[j] = _lin_comb(wj, a // g, wp, -(b // g))
                ts[j] = _lin_comb(tj, a // g, tp, -(b // g))
            ws[j].pop(row, None)
        a = ws[piv][row]
        if r == 0:
            del ws[piv]
            del ts[piv]
        else:
            f = r // gcd(a, r)
            if f != 1:
                ws[piv] = _scaled(ws[piv], f)
                ts[piv] = _scaled(ts[piv], f)
            ws[piv].pop(row, None)

    return [ts[j] for j in sorted(ts)]


class EchelonLattice:
    """Column echelon form of a sublattice of Z^n, supporting exact solves.

    Built from a generating set; ``solve`` expresses a vector in the
    original generators (None when the vector is not in the lattice).
    """

    def __init__(self, columns: Sequence[dict[int, int]], nrows: int):
        ws: dict[int, dict[int, int]] = {j: dict(c) for j, c in enumerate(columns)}
        # (pivot_row, echelon column, combination in original generators)
        self.steps: list[tuple[int, dict[int, int], dict[int, int]]] = []
        ts: dict[int, dict[int, int]] = {j: {j: 1} for j in ws}
        retired: set[int] = set()

        for row in range(nrows):
            cands = [
                j for j, w in ws.items()
                if j not in retired and w.get(row)
            ]
            if not cands:
                continue
            cands.sort(key=lambda j: (abs(ws[j][row]), len(ws[j]) + len(ts[j])))
            piv = cands[0]
            for j in cands[1:]:
                a = ws[piv][row]
                b = ws[j][row]
                if b % a == 0:
                    q = b // a
                    ws[j] = _lin_comb(ws[j], 1, ws[piv], -q)
                    ts[j] = _lin_comb(ts[j], 1, ts[piv], -q)
                else:
                    g, x, y = extgcd(a, b)
                    wp, wj = ws[piv], ws[j]
                    tp, tj = ts[piv], ts[j]
                    ws[piv] = _lin_comb(wp, x, wj, y)
                    ts[piv] = _lin_comb(tp, x, tj, y)
                    ws[j] = _lin_comb(wj, a // g, wp, -(b // g))
                    ts[j] = _lin_comb(tj, a // g, tp, -(b // g))
            retired.add(piv)
            self.steps.append((row, ws[piv], ts[piv]))

        self.rank = len(self.steps)

    def solve(self, vector: dict[int, int]) -> Optional[dict[int, int]]:
        v = dict(vector)
        acc: dict[int, int] = {}
        for row, w, combo in self.steps:
            val = v.get(row, 0)
            if not val:
                continue
            piv = w[row]
            if val % piv:
                return None
            q = val // piv
            for k, x in w.items():
                nv = v.get(k, 0) - q * x
                if nv:
                    v[k] = nv
                elif k in v:
                    del v[k]
            for k, x in combo.items():
                nv = acc.get(k, 0) + q * x
                if nv:
                    acc[k] = nv
                elif k in acc:
                    del acc[k]
        if v:
            return None
        return acc


def diagonal_values(columns: Sequence[dict[int, int]], nrows: int) -> list[int]:
    """Diagonalize a sparse integer matrix by unimodular ops.

    Returns the multiset of nonzero diagonal values (not necessarily a
    divisibility chain; canonicalize downstream).
    """
    ws: dict[int, dict[int, int]] = {
        j: dict(c) for j, c in enumerate(columns) if c
    }
    done_rows: set[int] = set()
    out: list[int] = []

    while True:
        best = None
        best_key = None
        for j, w in ws.items():
            for row, v in w.items():
                if row in done_rows:
                    continue
                key = (abs(v), len(w))
                if best_key is None or key < best_key:
                    best_key = key
                    best = (row, j)
                    if key[0] == 1 and key[1] == 1:
                        break
            if best_key is not None and best_key[0] == 1 and best_key[1] == 1:
                break
        if best is None:
            break
        row, piv = best

        while True:
            # clear the pivot row across other columns
            for j in list(ws):
                if j == piv:
                    continue
                b = ws[j].get(row, 0)
                if not b:
                    continue
                a = ws[piv][row]
                if b % a == 0:
                    q = b // a
                    ws[j] = _lin_comb(ws[j], 1, ws[piv], -q)
                else:
                    g, x, y = extgcd(a, b)
                    wp, wj = ws[piv], ws[j]
                    ws[piv] = _lin_comb(wp, x, wj, y)
                    ws[j] = _lin_comb(wj, a // g, wp, -(b // g))
                ws[j].pop(row, None)
            # row ops within the pivot column (the only column with this row)
            col = ws[piv]
            a = col[row]
            moved = False
            for b_row in list(col):
                if b_row == row or b_row in done_rows:
                    continue
                v = col[b_row]
                q = v // a
                rem = v - q * a
                if rem:
                    col[b_row] = rem
                    row = b_row
                    moved = True
                    break
                else:
                    del col[b_row]
            if not moved:
                break

        out.append(abs(ws[piv][row]))
        done_rows.add(row)
        del ws[piv]
        if not ws:
            break
    return out


# ---------------------------------------------------------------------------
# prime field toolkit (numpy, exact modular arithmetic)
# ---------------------------------------------------------------------------

def rref_mod_p(a: np.ndarray, p: int, want_transform: bool = False):
    """Reduced row echelon form of ``a`` modulo the prime ``p``.

    Returns (r, pivot_columns, t) with t @ a == r mod p when the
    transform is requested.
    """
    a = np.array(a, dtype=np.int64) % p
    m, n = a.shape
    t = np.eye(m, dtype=np.int64) if want_transform else None
    pivots: list[int] = []
    r = 0
    for col in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, col])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
            if t is not None:
                t[[r, pr]] = t[[pr, r]]
        inv = pow(int(a[r, col]), p - 2, p)
        if inv != 1:
            a[r] = (a[r] * inv) % p
            if t is not None:
                t[r] = (t[r] * inv) % p
        other = np.nonzero(a[:, col])[0]
        other = other[other != r]
        if other.size:
            f = a[other, col][:, None]
            a[other] = (a[other] - f * a[r]) % p
            if t is not None:
                t[other] = (t[other] - f * t[r]) % p
        pivots.append(col)
        r += 1
    return a, pivots, t


def kernel_mod_p(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of the null space of ``a`` over F_p, as columns of an (n x u) array."""
    n = a.shape[1]
    r, pivots, _ = rref_mod_p(a, p)
    free = [j for j in range(n) if j not in set(pivots)]
    k = np.zeros((n, len(free)), dtype=np.int64)
    for idx, f in enumerate(free):
        k[f, idx] = 1
        for i, pc in enumerate(pivots):
            k[pc, idx] = (-int(r[i, f])) % p
    return k


def smith_mod_prime_power(a: np.ndarray, p: int, e: int,
                          want_row: bool = False, want_col: bool = False):
    """Smith normal form over the ring Z/p^e.

    Returns (valuations, row_t, row_t_inv, col_t, col_t_inv) with
    row_t @ a @ col_t = diag(p^valuations) modulo p^e.  A pivot of
    minimal valuation divides every remaining entry, so each pivot
    clears its row and column in one pass and all entries stay reduced
    modulo p^e.
    """
    q = p ** e
    if q >= 1 << 20:
        raise ValueError("prime power modulus too large for exact int64 arithmetic")
    a = np.array(a, dtype=np.int64) % q
    m, n = a.shape
    row_t = np.eye(m, dtype=np.int64) if want_row else None
    row_t_inv = np.eye(m, dtype=np.int64) if want_row else None
    col_t = np.eye(n, dtype=np.int64) if want_col else None
    col_t_inv = np.eye(n, dtype=np.int64) if want_col else None
    vals: list[int] = []

    for t in range(min(m, n)):
        block = a[t:, t:]
        if not block.any():
            break
        pivot = None
        for v in range(e):
            pv1 = p ** (v + 1)
            cand = np.nonzero(block % pv1)
            if cand[0].size:
                pivot = (t + int(cand[0][0]), t + int(cand[1][0]), v)
                break
        if pivot is None:
            break
        i, j, v = pivot
        if i != t:
            a[[t, i]] = a[[i, t]]
            if row_t is not None:
                row_t[[t, i]] = row_t[[i, t]]
                row_t_inv[:, [t, i]] = row_t_inv[:, [i, t]]
        if j != t:
            a[:, [t, j]] = a[:, [j, t]]
            if col_t is not None:
                col_t[:, [t, j]] = col_t[:, [j, t]]
                col_t_inv[[t, j]] = col_t_inv[[j, t]]
        pv = p ** v
        unit = int(a[t, t]) // pv
        inv_unit = pow(unit, -1, q)
        if inv_unit != 1:
            a[t] = (a[t] * inv_unit) % q
            if row_t is not None:
                row_t[t] = (row_t[t] * inv_unit) % q
                row_t_inv[:, t] = (row_t_inv[:, t] * unit) % q
        col_vals = a[t + 1:, t]
        nz = np.nonzero(col_vals)[0]
        if nz.size:
            f = (col_vals[nz] // pv)[:, None]
            rows = t + 1 + nz
            a[rows] = (a[rows] - f * a[t]) % q
            if row_t is not None:
                row_t[rows] = (row_t[rows] - f * row_t[t]) % q
                row_t_inv[:, t] = (row_t_inv[:, t]
                                   + (row_t_inv[:, rows] * f.T).sum(axis=1)) % q
        row_vals = a[t, t + 1:]
        nz = np.nonzero(row_vals)[0]
        if nz.size:
            g = (row_vals[nz] // pv)[None, :]
            cols = t + 1 + nz
            a[:, cols] = (a[:, cols] - a[:, t:t + 1] * g) % q
            if col_t is not None:
                col_t[:, cols] = (col_t[:, cols] - col_t[:, t:t + 1] * g) % q
                col_t_inv[t] = (col_t_inv[t] + (g.T * col_t_inv[cols]).sum(axis=0)
                                ) % q
        vals.append(v)
    return vals, row_t, row_t_inv, col_t, col_t_inv


class PrimePowerQuotientSolver:
    """ker(out)/im(in) for a complex of free modules over Z/p^e.

    Diagonalizing the in-map splits the image off as a diagonal
    submodule; diagonalizing the transported out-map identifies the
    kernel as a direct sum of cyclic submodules.  The quotient is then
    an integer cokernel with entries below p^e.
    """

    def __init__(self, a_in: np.ndarray, b_out: np.ndarray, p: int, e: int):
        self.p, self.e = p, e
        q = self.q = p ** e
        c = a_in.shape[0]
        if b_out.shape[1] != c:
            raise ValueError("complex dimensions disagree")
        vals_a, u, u_inv, _, _ = smith_mod_prime_power(a_in, p, e,
                                                       want_row=True)
        alpha = [vals_a[i] if i < len(vals_a) else e for i in range(c)]
        b2 = (b_out.astype(np.int64) % q) @ u_inv % q
        vals_b, _, _, t_mat, t_inv = smith_mod_prime_power(b2, p, e,
                                                           want_col=True)
        beta = [vals_b[j] if j < len(vals_b) else e for j in range(c)]
        self._u, self._u_inv = u, u_inv
        self._t, self._t_inv = t_mat, t_inv
        self._beta = beta
        self.kept = [j for j in range(c) if beta[j] > 0]
        kept_pos = {j: idx for idx, j in enumerate(self.kept)}

        rel_cols: list[dict[int, int]] = []
        for i in range(c):
            if alpha[i] >= e:
                continue
            z = (t_inv[:, i] * (p ** alpha[i])) % q
            col: dict[int, int] = {}
            for j in range(c):
                zj = int(z[j])
                need = p ** (e - beta[j])
                if zj % need:
                    raise ArithmeticError("image escapes the kernel submodule")
                if beta[j] == 0:
                    continue
                cij = (zj // need) % (p ** beta[j])
                if cij:
                    col[kept_pos[j]] = cij
            rel_cols.append(col)
        for idx, j in enumerate(self.kept):
            rel_cols.append({idx: p ** beta[j]})

        nk = len(self.kept)
        w_dense = [[0] * len(rel_cols) for _ in range(nk)]
        for jj, col in enumerate(rel_cols):
            for ii, val in col.items():
                w_dense[ii][jj] = val
        from .abelian import _snf_in_place
        u_rows, _, u_inv_rows, _ = _snf_in_place(
            w_dense, nk, len(rel_cols), want_transforms=True, want_inverses=True
        )
        diag = [w_dense[i][i] if i < len(rel_cols) else 0 for i in range(nk)]
        keep = [i for i in range(nk) if diag[i] != 1]
        self._rel_u = u_rows if u_rows is not None else []
        self._rel_u_inv = u_inv_rows if u_inv_rows is not None else []
        self._keep = keep
        self.gen_orders = tuple(diag[i] for i in keep)

    @property
    def dim(self) -> int:
        return len(self.gen_orders)

    def representatives(self) -> list[np.ndarray]:
        q = self.q
        p, e = self.p, self.e
        out = []
        for k in self._keep:
            w = [self._rel_u_inv[row][k] for row in range(len(self.kept))]
            y = np.zeros(self._t.shape[0], dtype=np.int64)
            for idx, j in enumerate(self.kept):
                coef = (w[idx] * (p ** (e - self._beta[j]))) % q
                if coef:
                    y = (y + coef * self._t[:, j]) % q
            x = (self._u_inv @ y) % q
            out.append(x)
        return out

    def class_of(self, vector: np.ndarray) -> tuple[int, ...]:
        q = self.q
        p, e = self.p, self.e
        y = (self._u @ (np.asarray(vector, dtype=np.int64) % q)) % q
        z = (self._t_inv @ y) % q
        w = []
        for j in range(len(self._beta)):
            zj = int(z[j])
            need = p ** (e - self._beta[j])
            if zj % need:
                raise ArithmeticError("vector is not a cocycle modulo p^e")
            if self._beta[j] > 0:
                w.append((zj // need) % (p ** self._beta[j]))
        coords = []
        for pos, i in enumerate(self._keep):
            row = self._rel_u[i]
            acc = sum(row[jj] * w[jj] for jj in range(len(w)) if row[jj])
            d = self.gen_orders[pos]
            coords.append(acc % d if d else acc)
        return tuple(coords)


class FpQuotientSolver:
    """Quotient of span(kernel columns) by span(boundary columns) over F_p.

    Chooses representative kernel columns extending a basis of the
    boundary span, and solves class membership through the recorded
    row-reduction transform.
    """

    def __init__(self, boundaries: np.ndarray, kernel: np.ndarray, p: int):
        self.p = p
        c = kernel.shape[0]
        k = boundaries.shape[1] if boundaries.size else 0
        if k:
            m = np.concatenate([boundaries % p, kernel % p], axis=1)
        else:
            m = kernel % p
        r, pivots, t = rref_mod_p(m, p, want_transform=True)
        self.transform = t
        self.rep_rows: list[int] = []
        self.rep_cols: list[int] = []
        for i, col in enumerate(pivots):
            if col >= k:
                self.rep_rows.append(i)
                self.rep_cols.append(col - k)
        self.dim = len(self.rep_cols)
        self.kernel = kernel
        self.ambient = c

    def representatives(self) -> np.ndarray:
        """Columns of representative cocycles (ambient x dim)."""
        return self.kernel[:, self.rep_cols] % self.p

    def class_of(self, vector: np.ndarray) -> tuple[int, ...]:
        w = (self.transform @ (np.asarray(vector, dtype=np.int64) % self.p)) % self.p
        return tuple(int(w[i]) for i in self.rep_rows)
