#!/usr/bin/env python3
"""
Moser-Trudinger Lab - Acceptance Validation
===========================================

Runs the twelve acceptance criteria of the lab end to end and reports
pass/fail per criterion with timings, in the same format as a deployment
readiness check.
"""

import io
import json
import math
import sys
import time
from contextlib import redirect_stdout
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple
import logging

import numpy as np

# Add current directory to Python path
sys.path.insert(0, str(Path(__file__).parent))

try:
    from config import get_config
    import app
    from mtlab.constants import (
        ExponentPair,
        ball_volume,
        carleson_chang_limit,
        concentration_level,
        concentration_level_gamma_form,
    )
    from mtlab.experiments import (
        TOLERANCES,
        limit_grid,
        pointwise_limit_study,
        sweep_concentration,
        sweep_mp_limit,
        two_bubble_study,
        verify_suite,
    )
    from mtlab.maximizer import MaximizerConfig, maximize
    from mtlab.reports import ExperimentReport
    from mtlab.specfun import EULER_GAMMA, digamma, harmonic
except ImportError as e:
    print(f"❌ Import error: {e}")
    print("📋 Ensure config.py, app.py and the mtlab package are available")
    sys.exit(1)

SUITE_TRIALS = {"elementary": 10_000, "sandwich": 10_000, "radial-lemma": 1_000, "alvino": 1_000}


def _exact_harmonic(m: int) -> Fraction:
    return sum((Fraction(1, j) for j in range(1, m + 1)), Fraction(0))


class LabValidator:
    """Acceptance criteria as named checks"""

    def __init__(self, quick: bool = False):
        self.logger = logging.getLogger(f"{__name__}.LabValidator")
        self.config = get_config()
        self.quick = quick
        self.test_results: List[Dict[str, Any]] = []
        self._concentration: Optional[ExperimentReport] = None

    def run_all_tests(self) -> Tuple[bool, Dict[str, Any]]:
        """Run the complete acceptance suite"""

        self.logger.info("🧪 Starting acceptance validation...")

        tests = [
            ("Carleson-Chang limit", self._test_cc_limit),
            ("M_p convergence", self._test_mp_convergence),
            ("Dual-form identity", self._test_dual_form),
            ("Digamma identity", self._test_digamma_identity),
            ("L^p* concentration", self._test_lpstar_concentration),
            ("Concentration lower bound", self._test_concentration_bounds),
            ("H vanishing", self._test_h_vanishing),
            ("Inequality suites", self._test_inequality_suites),
            ("Pointwise limit", self._test_pointwise_limit),
            ("Two-bubble splitting", self._test_two_bubble),
            ("Maximizer sanity", self._test_maximizer),
            ("Determinism", self._test_determinism),
        ]

        passed = 0
        failed = 0

        for test_name, test_func in tests:
            self.logger.info(f"🔍 Running test: {test_name}")
            started = time.perf_counter()

            try:
                result = test_func()
                self.test_results.append({
                    "test": test_name,
                    "status": "passed" if result["success"] else "failed",
                    "message": result["message"],
                    "details": result.get("details", {}),
                    "seconds": time.perf_counter() - started,
                })

                if result["success"]:
                    self.logger.info(f"✅ {test_name}: {result['message']}")
                    passed += 1
                else:
                    self.logger.error(f"❌ {test_name}: {result['message']}")
                    failed += 1

            except Exception as e:
                self.logger.error(f"💥 {test_name}: Exception - {e}")
                self.test_results.append({
                    "test": test_name,
                    "status": "error",
                    "message": f"Test failed with exception: {e}",
                    "seconds": time.perf_counter() - started,
                })
                failed += 1

        all_passed = failed == 0
        report = {
            "overall_status": "passed" if all_passed else "failed",
            "summary": {
                "total_tests": len(tests),
                "passed": passed,
                "failed": failed,
                "pass_rate": (passed / len(tests)) * 100
            },
            "config": {
                "version": self.config.version,
                "workers": self.config.workers,
                "mesh": f"{self.config.panels}x{self.config.nodes_per_panel}",
                "quick": self.quick,
            },
            "tests": self.test_results,
            "timestamp": time.time()
        }

        if all_passed:
            self.logger.info(f"🎉 All tests passed! ({passed}/{len(tests)})")
        else:
            self.logger.error(f"💥 {failed} test(s) failed out of {len(tests)}")

        return all_passed, report

    # -- closed forms ----------------------------------------------------------

    def _test_cc_limit(self) -> Dict[str, Any]:
        errors = {}
        errors[2] = abs(carleson_chang_limit(2) - math.pi * (1.0 + math.e)) / (math.pi * (1.0 + math.e))
        for N in range(3, 7):
            vol = math.pi ** (N / 2) / math.gamma(N / 2 + 1)
            expected = vol * (1.0 + math.exp(float(_exact_harmonic(N - 1))))
            errors[N] = abs(carleson_chang_limit(N) - expected) / expected
        worst = max(errors.values())
        return {
            "success": worst <= 1e-12,
            "message": f"worst relative error {worst:.2e}",
            "details": {str(N): err for N, err in errors.items()},
        }

    def _test_mp_convergence(self) -> Dict[str, Any]:
        details = {}
        success = True
        for N in (2, 3, 4):
            report = sweep_mp_limit(N, limit_grid(N, range(1, 6)), workers=self.config.workers)
            gap_k4 = report.gaps("M_p", "gamma_form")[3]
            ok = report.passed and gap_k4 < TOLERANCES["mp_gap_k4"]
            details[str(N)] = {"gap_k4": gap_k4, "checks_passed": report.passed}
            success = success and ok
        return {"success": success, "message": "gap decreasing, below tolerance at k = 4" if success
                else "M_p gap trend or tolerance violated", "details": details}

    def _test_dual_form(self) -> Dict[str, Any]:
        worst = 0.0
        count = 0
        for N in range(2, 6):
            low = 2.0 * N / (N + 1.0)
            for p in np.linspace(low, N, 102)[1:-1]:
                pair = ExponentPair(N, float(p))
                a, b = concentration_level(pair), concentration_level_gamma_form(pair)
                worst = max(worst, abs(a - b) / b)
                count += 1
        return {
            "success": worst <= TOLERANCES["forms_agree"],
            "message": f"{count} pairs, worst relative difference {worst:.2e}",
        }

    def _test_digamma_identity(self) -> Dict[str, Any]:
        worst = abs(digamma(1.0) + EULER_GAMMA)
        for N in range(2, 21):
            worst = max(worst, abs(digamma(float(N)) - digamma(1.0) - harmonic(N - 1)))
        return {"success": worst <= 1e-10, "message": f"worst absolute error {worst:.2e}"}

    # -- concentration ------------------------------------------------------------

    def _concentration_report(self) -> ExperimentReport:
        if self._concentration is None:
            self._concentration = sweep_concentration(ExponentPair(2, 1.5), quad=self.config.quadrature(),
                                                      workers=self.config.workers)
        return self._concentration

    def _checks(self, report: ExperimentReport, *names: str) -> Dict[str, bool]:
        return {check.name: check.passed for check in report.checks if check.name in names}

    def _test_lpstar_concentration(self) -> Dict[str, Any]:
        report = self._concentration_report()
        checks = self._checks(report, "lpstar gap decreasing", "terminal lpstar gap")
        rows = {row.parameter: row.rel_gap for row in report.select("lpstar_integral")}
        return {
            "success": len(checks) == 2 and all(checks.values()),
            "message": f"relative gap {rows.get(1e-3, math.nan):.3e} at eps = 1e-3",
            "details": checks,
        }

    def _test_concentration_bounds(self) -> Dict[str, Any]:
        report = self._concentration_report()
        checks = self._checks(report, "f_p gap decreasing", "terminal f_p gap", "upper estimate M_p + int H",
                              "lower estimate |B| + leading int |W|^p*")
        last = report.select("f_p_integral")[-1]
        return {
            "success": len(checks) == 4 and all(checks.values()),
            "message": f"relative gap {last.rel_gap:.3e} at eps = {last.parameter:g}",
            "details": checks,
        }

    def _test_h_vanishing(self) -> Dict[str, Any]:
        report = self._concentration_report()
        checks = self._checks(report, "h integral decreasing")
        values = [row.computed for row in report.select("h_integral")]
        return {
            "success": checks.get("h integral decreasing", False),
            "message": f"int H from {values[0]:.3e} to {values[-1]:.3e}",
        }

    # -- randomized and limit checks ---------------------------------------------

    def _test_inequality_suites(self) -> Dict[str, Any]:
        details = {}
        for suite, trials in SUITE_TRIALS.items():
            trials = max(trials // 10, 1) if self.quick else trials
            report = verify_suite(suite, trials, seed=0, quad=self.config.quadrature(), workers=self.config.workers)
            details[suite] = {"trials": trials, "worst_margin": report.metadata["worst_margin"],
                              "passed": report.passed}
        success = all(item["passed"] for item in details.values())
        return {"success": success, "message": "zero violations" if success else "violations found",
                "details": details}

    def _test_pointwise_limit(self) -> Dict[str, Any]:
        report = pointwise_limit_study(2, quad=self.config.quadrature(), workers=self.config.workers)
        checks = {c.name: c.passed for c in report.checks if c.name.startswith("pointwise")}
        return {"success": len(checks) == 3 and all(checks.values()),
                "message": f"{sum(checks.values())}/{len(checks)} series decreasing", "details": checks}

    def _test_two_bubble(self) -> Dict[str, Any]:
        report = two_bubble_study(ExponentPair(2, 1.5), quad=self.config.quadrature(), workers=self.config.workers)
        return {"success": report.passed,
                "message": f"final C_n gap {report.gaps('C_n')[-1]:.3e}",
                "details": {c.name: c.passed for c in report.checks}}

    def _test_maximizer(self) -> Dict[str, Any]:
        pair = ExponentPair(2, 1.5)
        cfg = MaximizerConfig(knots=32 if self.quick else 64, max_iters=40 if self.quick else 200)
        first = maximize(pair, cfg, self.config.quadrature(), workers=self.config.workers)
        second = maximize(pair, cfg, self.config.quadrature(), workers=self.config.workers)
        floor = max(ball_volume(2), first.best_w_eps or 0.0)
        deterministic = first.as_rows() == second.as_rows()
        success = first.value >= floor - 1e-12 and deterministic
        return {
            "success": success,
            "message": f"value {first.value:.8g} ({first.winner}), M_p {first.M_p:.8g}",
            "details": {"deterministic": deterministic, "outcomes": [s.outcome for s in first.starts]},
        }

    def _test_determinism(self) -> Dict[str, Any]:
        commands = [
            ["constants", "--dim", "2", "--p", "1.5"],
            ["sweep-mp", "--dim", "2", "--p-grid", "1.9:1.9999:5", "--format", "json"],
            ["verify", "--suite", "sandwich", "--trials", "200", "--seed", "7"],
        ]
        mismatched = []
        for argv in commands:
            outputs = []
            for _ in range(2):
                buffer = io.StringIO()
                with redirect_stdout(buffer):
                    app.main(argv)
                outputs.append(buffer.getvalue())
            if outputs[0] != outputs[1] or not outputs[0]:
                mismatched.append(" ".join(argv))
        return {"success": not mismatched,
                "message": "byte-identical repeats" if not mismatched else f"differs: {mismatched}"}


def save_report(report: Dict[str, Any], filename: str = "lab-validation-report.json"):
    """Save validation report to file"""
    try:
        with open(filename, 'w') as f:
            json.dump(report, f, indent=2, default=str)
        print(f"📄 Validation report saved to: {filename}")
    except Exception as e:
        print(f"⚠️ Failed to save report: {e}")


def print_summary(report: Dict[str, Any]):
    """Print validation summary"""
    print("\n" + "="*60)
    print("🧪 LAB ACCEPTANCE SUMMARY")
    print("="*60)

    summary = report["summary"]
    print(f"📊 Overall Status: {'✅ PASSED' if report['overall_status'] == 'passed' else '❌ FAILED'}")
    print(f"📈 Pass Rate: {summary['pass_rate']:.1f}% ({summary['passed']}/{summary['total_tests']})")
    print(f"📐 Mesh: {report['config']['mesh']}")
    print(f"🧵 Workers: {report['config']['workers']}")

    for test in report["tests"]:
        mark = "✅" if test["status"] == "passed" else "❌"
        print(f"  {mark} {test['test']:<28} {test['seconds']:7.2f}s  {test['message']}")

    print("="*60 + "\n")


def main():
    """Main validation entry point"""
    import argparse

    parser = argparse.ArgumentParser(description="Moser-Trudinger Lab acceptance validator")
    parser.add_argument("--output", "-o", help="Output file for validation report")
    parser.add_argument("--verbose", "-v", action="store_true", help="Verbose logging")
    parser.add_argument("--json-only", action="store_true", help="Output only JSON report")
    parser.add_argument("--quick", action="store_true", help="Fewer random trials and a smaller maximizer run")

    args = parser.parse_args()

    log_level = logging.DEBUG if args.verbose else logging.INFO
    logging.basicConfig(
        level=log_level,
        format="%(asctime)s - %(levelname)s - %(message)s"
    )
    logging.getLogger().setLevel(log_level)

    validator = LabValidator(quick=args.quick)
    success, report = validator.run_all_tests()

    if args.json_only:
        print(json.dumps(report, indent=2, default=str))
    else:
        print_summary(report)

    if args.output:
        save_report(report, args.output)

    sys.exit(0 if success else 1)


if __name__ == "__main__":
    main()
