"""Regenerate tests/data/enumeration_prior.json.

The table holds the marginal prior probability of every canonical
assignment configuration of a T=2, N=3 sticky HDP-HMM restricted to at
most 2 clusters, estimated by forward Monte Carlo from the generative
process (stick-breaking weights, Dirichlet transition rows with the
sticky bonus, virtual sticky-free initial row).  The exactness check in
the test suite multiplies these prior masses by closed-form
Gamma-Poisson block marginals to obtain the exact posterior a correct
sampler must match.
"""

import json
from pathlib import Path

import numpy as np

from tvbiclust.types import Hyperparams

T, N, CAP = 2, 3, 2
KMAX = 60
NSIMS = 8_000_000
BATCH = 200_000
SEED = 99


def canon_code(z):
    seen = {}
    out = []
    for lab in np.asarray(z).ravel():
        if lab not in seen:
            seen[lab] = len(seen)
        out.append(seen[lab])
    return "".join(str(c) for c in out)


def main():
    hp = Hyperparams()
    gen = np.random.default_rng(SEED)
    counts = {}
    kept = 0

    def dir_rows(params):
        g = gen.gamma(np.maximum(params, 1e-12))
        return g / g.sum(axis=1, keepdims=True)

    for _ in range(NSIMS // BATCH):
        v = gen.beta(1.0, hp.gamma, (BATCH, KMAX))
        beta = v * np.concatenate(
            [np.ones((BATCH, 1)), np.cumprod(1 - v[:, :-1], axis=1)], axis=1
        )
        rest = np.cumprod(1 - v, axis=1)[:, -1]
        betaf = np.concatenate([beta, rest[:, None]], axis=1)
        pi0 = dir_rows(hp.alpha0 * betaf)
        z = np.empty((BATCH, T, N), dtype=np.int64)
        cum0 = np.cumsum(pi0, axis=1)
        for i in range(N):
            u = gen.random(BATCH)
            z[:, 0, i] = (u[:, None] > cum0).sum(axis=1)
        zs = z[:, 0, :]
        piT = np.zeros((BATCH, N, KMAX + 1))
        # objects sharing a source cluster share that cluster's transition row
        for slot in range(N):
            src = zs[:, slot]
            reuse = np.zeros(BATCH, dtype=bool)
            for prev in range(slot):
                same = (zs[:, prev] == src) & ~reuse
                piT[same, slot, :] = piT[same, prev, :]
                reuse |= same
            need = ~reuse
            if need.any():
                params = hp.alpha0 * betaf[need]
                params[np.arange(need.sum()), src[need]] += hp.kappa
                piT[need, slot, :] = dir_rows(params)
        cum1 = np.cumsum(piT, axis=2)
        for i in range(N):
            u = gen.random(BATCH)
            z[:, 1, i] = (u[:, None] > cum1[:, i, :]).sum(axis=1)
        ok = np.array([len(set(zz.ravel().tolist())) <= CAP for zz in z])
        kept += int(ok.sum())
        for zz in z[ok]:
            code = canon_code(zz)
            counts[code] = counts.get(code, 0) + 1

    total = sum(counts.values())
    table = {
        "t": T,
        "n": N,
        "cap": CAP,
        "nsims": NSIMS,
        "seed": SEED,
        "accept_rate": kept / NSIMS,
        "prior": {code: cnt / total for code, cnt in sorted(counts.items())},
    }
    out = Path(__file__).resolve().parent.parent / "tests" / "data" / "enumeration_prior.json"
    out.write_text(json.dumps(table, indent=1))
    print(out)


if __name__ == "__main__":
    main()
