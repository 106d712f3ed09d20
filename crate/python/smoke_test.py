"""Quick end-to-end check of the goldbach_sieve extension module."""

import json
from fractions import Fraction

import goldbach_sieve as gs


def main():
    inst = gs.Instance(4, p=15)
    assert inst.members() == [3, 12, 15]
    assert inst.members(1) == [3, 12]
    assert inst.size() == 3 and inst.size(5) == 1
    assert inst.index == 3 and inst.slices() == [1, 5]
    assert inst.is_admissible(18, 1) and not inst.is_admissible(1)
    assert inst.count("20.5") == 4
    assert inst.error("41/2") == Fraction(-2, 5)
    assert inst.error(Fraction(15, 2)) == 0
    assert abs(inst.spectrum(1) - 1.6180339887) < 1e-9
    assert abs(inst.spectrum(1, direct=True) - inst.spectrum(1)) < 1e-12
    assert inst.density() == Fraction(1, 5)

    try:
        inst.error("7")
    except ValueError:
        pass
    else:
        raise AssertionError("integer x must be rejected")

    verdicts = gs.check_ubh(400)
    bad = sorted(v.p for v in verdicts if v.violated)
    assert 23 in bad, bad
    worst = min(verdicts, key=lambda v: v.margin)
    assert worst.margin < 0 and worst.rhs - worst.lhs == worst.margin

    twin = [v.p for v in gs.check_twin(1, 101) if v.violated]
    assert twin == [17, 53, 59], twin

    report = json.loads(gs.scan("ubh", 312, 400))
    assert report["summary"]["checked"] == 89

    assert gs.goldbach_witness(5)[:3] == (2, 3, 7)
    assert gs.twin_witness(1, 5)[:3] == (12, 11, 13)

    c1, c2, c3, _ = gs.constants(100_000)
    assert abs(c2 - 0.66016) < 5e-5 and abs(c3 - 0.635166) < 5e-5
    assert abs(gs.hl_ratio() - 0.260947) < 1e-6
    assert gs.threshold_check(312) == (True, True)

    for name, passed, failed in gs.verify("counting", samples=10):
        assert failed == 0 and passed > 0, name

    print(f"ok: N=400 violated at p in {bad}; C1={c1:.9f}")


if __name__ == "__main__":
    main()
