"""Stage orchestration: every stage reads its inputs from the artifact store.

    gen-data -> train-twin -> build-labels -> train-clf -> evaluate
"""

import logging
from contextlib import contextmanager
from typing import Dict, List

from ..allocator.space import AllocationSpace, enumerate_allocations
from ..config import ConfigValidator, RunConfig
from ..errors import ArtifactIOError, ConfigError, LlcAllocError, StageError, ValidationError
from ..storage.artifacts import ArtifactStore
from ..twin.dataset import TwinDataset, generate_twin_dataset
from ..twin.model import DigitalTwin, train_twin, twin_fidelity
from .benchmark import BenchmarkReport, evaluate_policies, standard_policies
from .labels import ClassifierDataset, TrainedClassifier, build_classifier_dataset, label_agreement, train_classifier

logger = logging.getLogger(__name__)

STAGES = ("gen-data", "train-twin", "build-labels", "train-clf", "evaluate")


@contextmanager
def stage_errors(stage: str):
    """Tag any failure inside a stage with the stage name."""
    try:
        yield
    except StageError:
        raise
    except LlcAllocError as e:
        raise StageError(stage, e) from e
    except OSError as e:
        raise StageError(stage, ArtifactIOError(str(e))) from e


def check_config(config: RunConfig) -> None:
    is_valid, errors = ConfigValidator.validate_config(config)
    if not is_valid:
        raise ConfigError(errors)


def space_for(config: RunConfig) -> AllocationSpace:
    return enumerate_allocations(config.platform.n_llc, config.platform.n_vbs)


def _check_platform(found, config: RunConfig, what: str) -> None:
    if found != config.platform:
        raise ValidationError(f"{what} was built for a different platform than the config")


def load_twin_dataset(store: ArtifactStore) -> TwinDataset:
    return TwinDataset.load(*store.require("twin_dataset"))


def load_twin(store: ArtifactStore) -> DigitalTwin:
    return DigitalTwin.load(store.require("twin")[0])


def load_labels(store: ArtifactStore) -> ClassifierDataset:
    return ClassifierDataset.load(*store.require("labels"))


def load_classifier(store: ArtifactStore) -> TrainedClassifier:
    return TrainedClassifier.load(store.require("classifier")[0])


def run_gen_data(config: RunConfig, store: ArtifactStore) -> TwinDataset:
    with stage_errors("gen-data"):
        check_config(config)
        seed = config.stage_seed("gen-data")
        logger.info("gen-data: %d contexts, seed %d", config.sizes.twin_contexts, config.seed)
        ds = generate_twin_dataset(
            config.platform, config.oracle, config.sizes.twin_contexts, seed,
            profile=config.twin_profile, workers=config.workers,
        )
        store.ensure_dir()
        ds.save(*store.paths("twin_dataset"), extra={"config_hash": config.config_hash()})
        store.record("twin_dataset", "gen-data", config.config_hash(), config.seed)
        return ds


def run_train_twin(config: RunConfig, store: ArtifactStore) -> DigitalTwin:
    with stage_errors("train-twin"):
        check_config(config)
        ds = load_twin_dataset(store)
        _check_platform(ds.spec, config, "twin dataset")
        logger.info("train-twin: %d samples", len(ds.samples))
        dt = train_twin(ds, config.twin_train_config())
        if ds.split.test:
            fidelity = twin_fidelity(dt, config.oracle, ds.contexts(ds.split.test))
            dt.metadata["fidelity"] = fidelity.to_dict()
            logger.info(
                "Twin fidelity: mean relative error %.4f, ranking %.3f",
                fidelity.mean_relative_error, fidelity.ranking_fidelity,
            )
        dt.metadata["config_hash"] = config.config_hash()
        dt.save(store.path("twin"))
        store.record("twin", "train-twin", config.config_hash(), config.seed, inputs=["twin_dataset"])
        return dt


def run_build_labels(config: RunConfig, store: ArtifactStore) -> ClassifierDataset:
    with stage_errors("build-labels"):
        check_config(config)
        dt = load_twin(store)
        _check_platform(dt.spec, config, "twin")
        space = space_for(config)
        logger.info(
            "build-labels: %d contexts over %d allocations", config.sizes.classifier_contexts, len(space)
        )
        ds = build_classifier_dataset(
            dt, config.platform, space, config.sizes.classifier_contexts,
            config.stage_seed("build-labels"), profile=config.clf_profile, workers=config.workers,
        )
        ds.metadata["label_agreement"] = label_agreement(ds, space, config.oracle, workers=config.workers)
        ds.metadata["config_hash"] = config.config_hash()
        logger.info("Twin labels within 1%% of the true optimum: %.3f", ds.metadata["label_agreement"])
        ds.save(*store.paths("labels"))
        store.record("labels", "build-labels", config.config_hash(), config.seed, inputs=["twin"])
        return ds


def run_train_clf(config: RunConfig, store: ArtifactStore) -> TrainedClassifier:
    with stage_errors("train-clf"):
        check_config(config)
        ds = load_labels(store)
        _check_platform(ds.spec, config, "label set")
        logger.info("train-clf: %d labelled contexts", len(ds))
        clf = train_classifier(ds, space_for(config), config.clf_train_config(), params=config.oracle)
        clf.save(store.path("classifier"))
        store.record("classifier", "train-clf", config.config_hash(), config.seed, inputs=["labels"])
        return clf


def run_evaluate(config: RunConfig, store: ArtifactStore) -> BenchmarkReport:
    with stage_errors("evaluate"):
        check_config(config)
        clf = load_classifier(store)
        dt = load_twin(store)
        _check_platform(dt.spec, config, "twin")
        space = space_for(config)
        policies = standard_policies(config.platform, space, config.oracle, classifier=clf.model, twins=dt)
        logger.info(
            "evaluate: %s on %d contexts", ", ".join(p.name for p in policies), config.sizes.eval_contexts
        )
        report = evaluate_policies(
            config.platform, config.oracle, policies, config.sizes.eval_contexts,
            interval_s=config.interval_s, seed=config.stage_seed("evaluate"),
            profile=config.eval_profile, workers=config.workers,
        )
        report_csv, summary_json = store.paths("report")
        report.write_csv(report_csv)
        report.write_summary(summary_json)
        with open(store.path("plotdata"), "w", newline="") as f:
            report.write_plotdata(f)
        digest = config.config_hash()
        store.record(
            "report", "evaluate", digest, config.seed,
            inputs=["twin_dataset", "twin", "labels", "classifier"],
        )
        store.record("plotdata", "evaluate", digest, config.seed, inputs=["report"])
        return report


STAGE_RUNNERS = {
    "gen-data": run_gen_data,
    "train-twin": run_train_twin,
    "build-labels": run_build_labels,
    "train-clf": run_train_clf,
    "evaluate": run_evaluate,
}


def run_full_pipeline(config: RunConfig, store: ArtifactStore = None) -> Dict[str, List[str]]:
    """Run every stage in order; returns artifact name -> written file paths."""
    store = store or ArtifactStore(config.output_dir)
    for stage in STAGES:
        STAGE_RUNNERS[stage](config, store)
    manifest = store.load_manifest()
    return {name: [str(p) for p in store.paths(name)] for name in manifest["artifacts"]}
