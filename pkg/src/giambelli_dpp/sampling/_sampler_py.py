"""Pure-numpy sampling kernels; the reference for the compiled ``_csampler``."""

from __future__ import annotations

import numpy as np

REORTH_EVERY = 16


def project_sample(V: np.ndarray, picks: np.ndarray, occ: np.ndarray) -> None:
    """One draw from the projection DPP with kernel V V^T (V has orthonormal columns).

    Sequential chain rule: the residual diagonal ``d`` drops (V_i . q_t)^2 after
    each pick, where q_t is the Gram-Schmidt direction of the chosen row. Every
    ``REORTH_EVERY`` steps the newest block of directions gets a second
    Gram-Schmidt pass. Marks chosen rows in ``occ``.
    """
    n, k = V.shape
    if k == 0:
        return
    d = np.einsum("ij,ij->i", V, V)
    Q = np.zeros((k, k))
    for t in range(k):
        dd = np.where(d > 0.0, d, 0.0)
        cum = np.cumsum(dd)
        x = int(np.searchsorted(cum, picks[t] * cum[-1], side="right"))
        x = min(x, n - 1)
        while x > 0 and not dd[x] > 0.0:
            x -= 1
        occ[x] = 1
        r = V[x] - Q[:t].T @ (Q[:t] @ V[x])
        Q[t] = r / np.linalg.norm(r)
        if (t + 1) % REORTH_EVERY == 0:
            for a in range(t + 1 - REORTH_EVERY, t + 1):
                q = Q[a] - Q[:a].T @ (Q[:a] @ Q[a])
                Q[a] = q / np.linalg.norm(q)
        c = V @ Q[t]
        d = d - c * c
        d[occ.astype(bool)] = 0.0


def spectral_batch(vecs: np.ndarray, lam: np.ndarray, bern: np.ndarray,
                   picks: np.ndarray) -> np.ndarray:
    """Occupancy matrix (samples x sites) for a Hermitian contraction kernel.

    Column j of ``vecs`` is kept in sample s when ``bern[s, j] < lam[j]``; the
    resulting projection DPP is then sampled with ``picks[s]``.
    """
    vecs = np.ascontiguousarray(vecs, dtype=np.float64)
    S = bern.shape[0]
    n = vecs.shape[0]
    occ = np.zeros((S, n), dtype=np.uint8)
    for s in range(S):
        keep = bern[s] < lam
        project_sample(vecs[:, keep], picks[s], occ[s])
    return occ
