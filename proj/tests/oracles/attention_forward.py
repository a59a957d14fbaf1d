"""Scalar-by-scalar single-head attention layer on a 3-node path graph.

Prints the layer output for prelu (slope 0.25) and linear activations.
"""
import math

X = [[1.0, 0.5], [-0.3, 0.8], [0.2, -1.0]]
W = [[0.4, -0.2], [0.1, 0.3]]
A_SELF = [0.5, -0.4]
A_NBR = [0.3, 0.2]
NEIGHBOURS = {0: [0, 1], 1: [0, 1, 2], 2: [1, 2]}


def leaky(x, slope=0.2):
    return x if x > 0 else slope * x


def project(row):
    return [sum(row[k] * W[k][c] for k in range(2)) for c in range(2)]


def forward(activation):
    p = [project(r) for r in X]
    out = []
    for i in range(3):
        logits = {}
        for j in NEIGHBOURS[i]:
            s = sum(A_SELF[c] * p[i][c] for c in range(2)) + sum(A_NBR[c] * p[j][c] for c in range(2))
            logits[j] = leaky(s)
        z = sum(math.exp(v) for v in logits.values())
        alpha = {j: math.exp(v) / z for j, v in logits.items()}
        agg = [sum(alpha[j] * p[j][c] for j in NEIGHBOURS[i]) for c in range(2)]
        out.append([activation(v) for v in agg])
    return out


for name, act in [("prelu", lambda v: v if v > 0 else 0.25 * v), ("linear", lambda v: v)]:
    print(name)
    for row in forward(act):
        print("  {" + ", ".join(f"{v:.17g}" for v in row) + "},")
