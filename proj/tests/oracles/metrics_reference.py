"""Reference ACC / NMI / ARI from scipy's assignment solver and sklearn."""
import numpy as np
from scipy.optimize import linear_sum_assignment
from sklearn.metrics import adjusted_rand_score, normalized_mutual_info_score

CASES = {
    "worked": ([0, 0, 1, 1], [0, 1, 1, 1]),
    "independent": ([0, 0, 1, 1], [0, 1, 0, 1]),
    "twelve": ([0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3], [2, 2, 1, 0, 0, 0, 1, 1, 3, 3, 3, 2]),
    "unequal_k": ([0, 0, 1, 1, 1, 2, 2, 2, 2, 0], [1, 1, 1, 0, 0, 0, 0, 0, 2, 3]),
}


def acc(truth, pred):
    truth, pred = np.asarray(truth), np.asarray(pred)
    k = max(truth.max(), pred.max()) + 1
    w = np.zeros((k, k))
    for t, p in zip(truth, pred):
        w[p, t] += 1
    rows, cols = linear_sum_assignment(-w)
    return w[rows, cols].sum() / len(truth)


for name, (truth, pred) in CASES.items():
    print(f"{name}: acc {acc(truth, pred):.17g} "
          f"nmi {normalized_mutual_info_score(truth, pred, average_method='arithmetic'):.17g} "
          f"nmi_geo {normalized_mutual_info_score(truth, pred, average_method='geometric'):.17g} "
          f"ari {adjusted_rand_score(truth, pred):.17g}")
