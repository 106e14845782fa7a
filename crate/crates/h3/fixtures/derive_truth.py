#!/usr/bin/env python3
"""Ground truth for the pattern fixtures, from the definitions by brute force.

Run from this directory: python3 derive_truth.py > patterns/truth.json
"""
import itertools
import json
import pathlib


def read(path):
    lines = [l.strip() for l in path.read_text().splitlines()]
    lines = [l for l in lines if l and not l.startswith("#")]
    k, m = map(int, lines[0].split())
    edges = [tuple(sorted(map(int, l.split()))) for l in lines[1:]]
    assert len(edges) == m
    return k, edges


def linear(edges):
    return all(len(set(a) & set(b)) <= 1 for a, b in itertools.combinations(edges, 2))


def connectors(k, edges):
    out = []
    for e in edges:
        hit = False
        for v in range(k):
            if v in e:
                continue
            through = [f for f in edges if v in f]
            for trio in itertools.combinations(through, 3):
                if all(len(set(f) & set(e)) == 1 for f in trio):
                    hit = True
        if hit:
            out.append(list(e))
    return out


def d_h(k, edges):
    # every subhypergraph: a vertex set W and any edge set inside W
    best = 0
    for r in range(1, k + 1):
        for w in itertools.combinations(range(k), r):
            ws = set(w)
            inside = [e for e in edges if set(e) <= ws]
            for s in range(len(inside) + 1):
                for f in itertools.combinations(inside, s):
                    best = max(best, min(sum(v in e for e in f) for v in w))
    return best


def aut(k, edges):
    es = set(edges)
    return sum(
        all(tuple(sorted(p[v] for v in e)) in es for e in edges)
        for p in itertools.permutations(range(k))
    )


def main():
    truth = {}
    for path in sorted(pathlib.Path("patterns").glob("*.h3")):
        k, edges = read(path)
        lin = linear(edges)
        dh = d_h(k, edges)
        delta = max((sum(v in e for e in edges) for v in range(k)), default=0)
        truth[path.stem] = {
            "k": k,
            "m": len(edges),
            "linear": lin,
            "connectors": connectors(k, edges) if lin else None,
            "d_H": dh,
            "D_H": min(3 * dh, delta),
            "max_degree": delta,
            "aut": aut(k, edges),
        }
    print(json.dumps(truth, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
