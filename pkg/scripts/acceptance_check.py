#!/usr/bin/env python3
"""Default-scale acceptance checks for the llcalloc pipeline.

Runs the full pipeline for the 12-way and 8-way scenarios and checks twin
fidelity, classifier quality and policy dominance. Takes several minutes;
run it manually, not from the test suite.
"""

import sys
import time
from pathlib import Path

from llcalloc.config import RunConfig
from llcalloc.pipeline.benchmark import BASELINES, BenchmarkReport
from llcalloc.pipeline.runner import load_classifier, load_twin, run_full_pipeline
from llcalloc.storage.artifacts import ArtifactStore

SAVINGS_FACTOR = 0.8


def check(description, passed, detail=""):
    """Print one check result and return whether it passed."""
    mark = "✅" if passed else "❌"
    print(f"{mark} {description}" + (f" ({detail})" if detail else ""))
    return passed


def check_scenario(name, config):
    print(f"\n🧪 Scenario {name}: {config.platform.n_llc} ways, {config.platform.n_vbs} vBS")
    print("=" * 50)
    started = time.time()
    run_full_pipeline(config)
    print(f"Pipeline finished in {time.time() - started:.0f}s")

    store = ArtifactStore(config.output_dir)
    fidelity = load_twin(store).metadata["fidelity"]
    clf = load_classifier(store)
    report = BenchmarkReport.read_csv(store.path("report"), config.interval_s, config.platform.watts_per_core)
    summaries = {s.policy: s for s in report.policy_summaries()}

    results = [
        check("Twin mean relative error <= 5%", fidelity["mean_relative_error"] <= 0.05,
              f"{fidelity['mean_relative_error']:.4f}"),
        check("Twin ranking fidelity >= 95%", fidelity["ranking_fidelity"] >= 0.95,
              f"{fidelity['ranking_fidelity']:.3f}"),
    ]
    if name == "default":
        results += [
            check("Classifier test accuracy >= 85%", clf.test_accuracy >= 0.85, f"{clf.test_accuracy:.3f}"),
            check("Classifier test regret <= 2%", clf.test_regret <= 0.02, f"{clf.test_regret:.4f}"),
            check("Classifier stopped early", clf.early_stopped, f"iteration {clf.stopped_at}"),
        ]
    for baseline in BASELINES:
        results.append(check(
            f"classifier uses no more energy than {baseline}",
            summaries["classifier"].mean_energy_j <= summaries[baseline].mean_energy_j,
        ))
        learned = report.savings("classifier", baseline).mean_savings_j
        best = report.savings("optimal", baseline).mean_savings_j
        results.append(check(
            f"classifier saves >= {SAVINGS_FACTOR:g} x optimal vs {baseline}",
            learned >= SAVINGS_FACTOR * best,
            f"{learned:.1f} J vs {best:.1f} J",
        ))
    return all(results)


def main():
    """Run both scenarios and exit non-zero on any failed check."""
    print("🚀 llcalloc acceptance check")
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("runs/acceptance")
    scenarios = {
        "default": RunConfig.default().with_overrides(output_dir=str(root / "default")),
        "eight_ways": RunConfig.eight_way().with_overrides(output_dir=str(root / "eight_ways")),
    }
    passed = [check_scenario(name, config) for name, config in scenarios.items()]
    print("\n" + ("🎉 All checks passed" if all(passed) else "Some checks failed"))
    sys.exit(0 if all(passed) else 1)


if __name__ == "__main__":
    main()
