"""Smoke test for the equinorm Python module."""

import math

import equinorm as eq


def main():
    assert eq.top_k_norm([3.0, 1.0, 2.0], 2) == 5.0
    w = eq.WeightVector([1.0, 0.5, 0.25])
    assert math.isclose(w.norm([1.0, 2.0, 4.0]), 4.0 + 1.0 + 0.25)
    assert math.isclose(eq.ordered_norm([1.0, 2.0, 4.0], [1.0, 0.5, 0.25]), 5.25)
    assert eq.majorizes([1.0, 1.0], [2.0, 0.0])
    assert len(eq.sample_weights(4, 5, 7)) == 5

    domain = [[2.0, 0.0], [1.0, 1.0], [1.5, 1.5]]
    port = eq.bucket_portfolio(domain, 0.5)
    ratio, _ = eq.certify_topk_ratio(port, domain)
    assert ratio <= 1.5 + 1e-9

    inst = eq.MlijInstance([3.0, 1.0, 2.0], 6)
    res = inst.build_portfolio(8.0)
    assert all(sum(s) == 6 for s in res["schedules"])
    ratio, _ = eq.certify_topk_ratio(res["loads"], inst.load_vectors())
    assert ratio <= 8.0 + 1e-9

    poly = eq.CoveringPolyhedron([[1.0, 0.0, 0.0], [0.0, 1.0, 1.0], [2.0, 1.0, 1.0]], [2.0, 4.0, 10.0])
    _, l1 = poly.min_ordered_norm([1.0, 1.0, 1.0])
    assert math.isclose(l1, 7.0, rel_tol=1e-9)
    exact = poly.build_portfolio(0.5, sparsify=False)
    assert [3.0, 2.0, 2.0] in [[round(v, 9) for v in x] for x in exact["vectors"]]

    sc = eq.set_cover_ordering(3, [[0, 1], [2], [1]])
    assert all(math.isfinite(t) for t in sc["times"])
    ct = eq.completion_times_ordering([[1.0, 2.0], [3.0, 1.0]], oracle="lp")
    assert ct["guarantee"] == 8.0

    star = eq.Metric.star(4)
    c = star.iterative_clustering(1, 1.0, mode="greedy3")
    assert c["facilities"]
    assert len(star.ufl_portfolio()) >= 1

    try:
        eq.MlijInstance([1.0] * 12, 40).load_vectors()
    except eq.SizeCapError:
        pass
    else:
        raise AssertionError("expected SizeCapError")
    try:
        eq.WeightVector([0.5, 1.0])
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")
    print("python smoke test passed")


if __name__ == "__main__":
    main()
