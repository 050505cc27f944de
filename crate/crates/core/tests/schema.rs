use std::fs;
use std::path::{Path, PathBuf};

use multistable_poisson::cli::RunConfig;
use multistable_poisson::harness::{run_suite, LocalizabilitySettings, Suite, ValidationSettings};
use multistable_poisson::model::{AlphaProfile, ModelParams, QuadratureSpec};
use serde_json::Value;

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn validator(name: &str) -> jsonschema::Validator {
    let text = fs::read_to_string(crate_dir().join("schemas").join(name)).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value, what: &str) {
    let errors: Vec<String> = v
        .iter_errors(doc)
        .map(|e| format!("{} at {}", e, e.instance_path))
        .collect();
    assert!(errors.is_empty(), "{what}: {errors:#?}");
}

fn toml_as_json(path: &Path) -> Value {
    let text = fs::read_to_string(path).unwrap();
    let doc: toml::Value = toml::from_str(&text).unwrap();
    serde_json::to_value(doc).unwrap()
}

fn shipped_configs() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = fs::read_dir(crate_dir().join("configs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .collect();
    out.sort();
    out
}

#[test]
fn shipped_configs_match_schema_and_parse() {
    let v = validator("run_config.schema.json");
    let configs = shipped_configs();
    assert!(configs.len() >= 4);
    for path in configs {
        assert_valid(&v, &toml_as_json(&path), &path.display().to_string());
        RunConfig::from_file(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}

#[test]
fn serialized_defaults_match_schema() {
    let model = ModelParams::new(1.0, AlphaProfile::constant(0.5).unwrap()).unwrap();
    let cfg = RunConfig::new(model);
    let doc = serde_json::to_value(&cfg).unwrap();
    assert_valid(&validator("run_config.schema.json"), &doc, "defaults");
}

#[test]
fn schema_rejects_unknown_keys() {
    let v = validator("run_config.schema.json");
    let mut doc = toml_as_json(&crate_dir().join("configs/constant.toml"));
    doc["model"]["extra"] = Value::from(1);
    assert!(!v.is_valid(&doc));
    let mut doc = toml_as_json(&crate_dir().join("configs/constant.toml"));
    doc["model"]["alpha"] = serde_json::json!({ "family": "constant", "value": 0.5, "slope": 1.0 });
    assert!(!v.is_valid(&doc));
}

#[test]
fn reports_match_schema() {
    let v = validator("comparison_report.schema.json");
    let settings = ValidationSettings {
        n_samples: 400,
        pmf_states: 64,
        localizability: LocalizabilitySettings {
            n_samples: 300,
            substeps: 4,
            ..Default::default()
        },
        ..Default::default()
    };
    let quad = QuadratureSpec::default();
    for alpha in [
        AlphaProfile::constant(0.6).unwrap(),
        AlphaProfile::LinearClamped {
            intercept: 0.3,
            slope: 0.8,
            min: 0.05,
            max: 0.95,
        },
    ] {
        let model = ModelParams::new(1.0, alpha).unwrap();
        let reports = run_suite(Suite::All, &model, &settings, 5, &quad).unwrap();
        assert_eq!(reports.len(), 3);
        for r in reports {
            assert_valid(&v, &serde_json::to_value(&r).unwrap(), &r.name);
        }
    }
}
