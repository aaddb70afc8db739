import io

import pytest

from frobsupport.bench import (
    BENCH_HEADER,
    bench,
    instance_seed,
    make_instance,
    write_csv,
)


def test_instances_are_deterministic():
    a = make_instance(3, 7, 2, 3, 2, 2)
    b = make_instance(3, 7, 2, 3, 2, 2)
    assert a.U == b.U and a.A == b.A
    c = make_instance(4, 7, 2, 3, 2, 2)
    assert (c.U, c.A) != (a.U, a.A)
    assert instance_seed(7, 3) != instance_seed(3, 7)


def test_instance_shapes_and_flags():
    gm = make_instance(0, 1, 3, 2, 2, 3, alpha=2)
    assert gm.beta == 2 and gm.alpha == 2
    assert gm.U.max_degree() <= 3
    gm = make_instance(0, 1, 3, 2, 2, 3, empty_a=True, zero_u=True)
    assert gm.alpha == 0 and gm.U.is_zero()


def test_small_bench_rerun_identical():
    r1 = bench(2, 3, 2, 2, 5, seed=11)
    r2 = bench(2, 3, 2, 2, 5, seed=11, jobs=2)
    assert [r.stable_fields() for r in r1] == [r.stable_fields() for r in r2]
    assert [r.id for r in r1] == list(range(5))
    assert all(r.time_ms >= 0 for r in r1)


def test_zero_u_row():
    (row,) = bench(2, 5, 2, 4, 1, seed=0, zero_u=True)
    assert (row.iters, row.gens, row.outcome) == (1, 0, "zero-module")


def test_csv_header_and_rows():
    rows = bench(3, 2, 1, 2, 2, seed=5)
    buf = io.StringIO()
    write_csv(rows, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == BENCH_HEADER
    assert len(lines) == 3
    assert all(len(line.split(",")) == 10 for line in lines)


@pytest.mark.parametrize("kw", [dict(p=4), dict(count=0), dict(beta=0)])
def test_bad_parameters(kw):
    args = dict(p=2, n=2, beta=1, deg=2, count=1, seed=0)
    args.update(kw)
    with pytest.raises(ValueError):
        bench(**args)


def test_resource_outcome_recorded():
    from frobsupport.groebner import GBLimits
    rows = bench(2, 2, 1, 2, 3, seed=2, alpha=1, limits=GBLimits(max_basis_size=0))
    assert [r.outcome for r in rows] == ["resource:groebner"] * 3
    assert [r.outcome for r in bench(2, 2, 1, 2, 3, seed=2)] == ["ok"] * 3
