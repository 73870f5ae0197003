#!/usr/bin/env python3
"""
bmforge - Acceptance Run

End-to-end runs of every subcommand on the reference weights, plus the
negative controls. Each check drives the command line the way a user would.
"""

import os
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from bmforge.cli import main as bmforge_main  # noqa: E402
from bmforge.cli.io import read_report  # noqa: E402

GRID_POINTS = os.environ.get("BMFORGE_ACCEPTANCE_POINTS", "16384")
WORKDIR = Path(tempfile.mkdtemp(prefix="bmforge-acceptance-"))


def _run(name, args, expected=0):
    """Run one command and compare its exit code."""
    print(f"🧪 {name}...")
    try:
        code = bmforge_main(args)
    except Exception as e:
        print(f"❌ {name} raised: {e}")
        return False
    if code == expected:
        print(f"✅ exit code {code}")
        return True
    print(f"❌ exit code {code}, expected {expected}")
    return False


def test_construct_dimensions():
    """exp_sqrt weight in dimensions 2 to 5."""
    ok = True
    for d in (2, 3, 4, 5):
        out = WORKDIR / f"construct_d{d}"
        args = [
            "construct", "--weight", "exp_sqrt", "--dim", str(d), "--sigma", "0.05",
            "--grid-points", GRID_POINTS, "--out", str(out),
        ]
        if not _run(f"construct d={d}", args):
            ok = False
            continue
        report = read_report(out / "spectrum_report.txt")
        worst = float(report["spectrum.worst_leakage_ratio"])
        print(f"   majorization_ratio={report['majorization_ratio']} routes={report['spectrum.routes']} worst_leakage={worst:.3e}")
        if worst > 1e-4:
            print("❌ leakage above 1e-4")
            ok = False
    return ok


def test_verify_round_trip():
    """verify accepts what construct wrote."""
    source = WORKDIR / "construct_d3" / "profile.csv"
    if not source.is_file():
        print("❌ no construct output to verify")
        return False
    args = [
        "verify", str(source), "--weight", "exp_sqrt", "--dim", "3", "--sigma", "0.05",
        "--out", str(WORKDIR / "verify"),
    ]
    return _run("verify d=3", args)


def test_majorize_chain():
    """Non-radial weight reduced and chained into construct."""
    args = [
        "majorize", "--weight", "exp(−sqrt(abs(x1)))", "--dim", "2", "--gamma", "2.5",
        "--grid-points", GRID_POINTS, "--continue", "--out", str(WORKDIR / "majorize"),
    ]
    if not _run("majorize --continue", args):
        return False
    report = read_report(WORKDIR / "majorize" / "holder_report.txt")
    print(f"   S1={report['holder.lhs_sum']} worst_margin={report['audit.worst_margin']}")
    return True


def test_calibrate():
    """Sonine constants for dimensions 2 to 16."""
    return _run("calibrate", ["calibrate", "--out", str(WORKDIR / "calibrate")])


def test_negative_controls():
    """Inadmissible weight and gamma at the boundary."""
    inadmissible = _run(
        "construct exp (inadmissible)",
        ["construct", "--weight", "exp", "--dim", "3", "--out", str(WORKDIR / "exp")],
        expected=2,
    )
    gamma = _run(
        "majorize gamma=d+1",
        ["majorize", "--weight", "exp_sqrt", "--dim", "2", "--gamma", "3", "--out", str(WORKDIR / "gamma")],
        expected=5,
    )
    return inadmissible and gamma


def main():
    """Run acceptance checks."""
    print("🚀 bmforge - Acceptance Run")
    print(f"📁 Output in {WORKDIR}")
    print("=" * 50)

    tests = [
        test_construct_dimensions,
        test_verify_round_trip,
        test_majorize_chain,
        test_calibrate,
        test_negative_controls,
    ]

    passed = 0
    total = len(tests)

    for test in tests:
        if test():
            passed += 1
        print()

    print("=" * 50)
    print(f"📊 Results: {passed}/{total} checks passed")

    if passed == total:
        print("🎉 All acceptance checks passed!")
        return 0
    print("❌ Acceptance checks failed - see the reports above")
    return 1


if __name__ == "__main__":
    sys.exit(main())
