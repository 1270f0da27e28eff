#!/usr/bin/env python3
"""Writes planted_landscape.kv: additive offsets q.<slot>.<thought>.<variant>.

Properties checked before writing:
  * thought 0 variants per slot are distinct and at least 0.006 apart
  * per slot the best thought (never 0) beats the runner-up by >= 0.012
  * the argmax strategy is unique
"""
import itertools
import random
import sys

ROLES = ["fjsp-op-crossover", "fjsp-op-mutation", "fjsp-machine-crossover", "fjsp-machine-mutation"]
THOUGHTS, VARIANTS = 4, 8
BASE, NOISE = 0.5, 0.001


def build(seed):
    rng = random.Random(seed)
    q = {}
    best = []
    for i in range(len(ROLES)):
        levels = [round(-0.03 + 0.006 * k, 4) for k in range(VARIANTS)]
        rng.shuffle(levels)
        for v in range(VARIANTS):
            q[i, 0, v] = levels[v]
        for g in range(1, THOUGHTS):
            for v in range(VARIANTS):
                q[i, g, v] = round(rng.uniform(-0.03, 0.015), 4)
        b = rng.randrange(1, THOUGHTS)
        top = max(q[i, g, v] for g in range(THOUGHTS) for v in range(VARIANTS))
        q[i, b, rng.randrange(VARIANTS)] = round(top + rng.uniform(0.012, 0.02), 4)
        best.append(b)
    return q, best


def check(q, best):
    def smax(i, g):
        return max(q[i, g, v] for v in range(VARIANTS))

    for i in range(len(ROLES)):
        zeros = sorted(q[i, 0, v] for v in range(VARIANTS))
        assert all(b - a >= 0.006 - 1e-9 for a, b in zip(zeros, zeros[1:]))
        ranked = sorted((smax(i, g) for g in range(THOUGHTS)), reverse=True)
        assert ranked[0] - ranked[1] >= 0.012 - 1e-9
        assert max(range(THOUGHTS), key=lambda g: smax(i, g)) == best[i] != 0
    values = {s: sum(smax(i, g) for i, g in enumerate(s))
              for s in itertools.product(range(THOUGHTS), repeat=len(ROLES))}
    top = max(values.values())
    assert sum(1 for v in values.values() if v == top) == 1


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "planted_landscape.kv"
    q, best = build(20240607)
    check(q, best)
    with open(out, "w") as f:
        f.write("# generated by make_planted_landscape.py\n")
        f.write("# argmax strategy: " + ",".join(map(str, best)) + "\n")
        f.write("roles = " + ",".join(ROLES) + "\n")
        f.write(f"thoughts = {THOUGHTS}\nvariants = {VARIANTS}\nbase = {BASE}\nnoise = {NOISE}\n")
        for (i, g, v), x in sorted(q.items()):
            f.write(f"q.{i}.{g}.{v} = {x}\n")


if __name__ == "__main__":
    main()
