use graphsa::report::{reproduce_example, reproduce_on, write_report, ExampleConfig, ExampleReport};
use graphsa::zoo::TriangularGraph;
use graphsa::{Result, Verdict, VertexId, WeightedGraph};

/// The triangular graph with `μ = 2k` instead of `2k^{1/2}`.
struct TamperedMu(TriangularGraph);

impl WeightedGraph for TamperedMu {
    fn describe(&self) -> String {
        "triangular graph with tampered mu".into()
    }
    fn contains(&self, x: &VertexId) -> bool {
        self.0.contains(x)
    }
    fn mu(&self, x: &VertexId) -> Result<f64> {
        self.0.mu(x)?;
        Ok(2.0 * x.row().unwrap() as f64)
    }
    fn for_each_neighbor(&self, x: &VertexId, visit: &mut dyn FnMut(&VertexId, f64)) -> Result<()> {
        self.0.for_each_neighbor(x, visit)
    }
    fn edge_weight(&self, x: &VertexId, y: &VertexId) -> Result<f64> {
        self.0.edge_weight(x, y)
    }
}

#[test]
fn tiny_run_passes_every_stage() {
    let r = reproduce_example(&ExampleConfig::reduced(3));
    assert_eq!(r.verdict, Verdict::Pass, "{:?}", r.failing_stages);
    assert!(r.stages.iter().all(|s| s.is_pass()));
    assert_eq!(r.config.seed, 42);
}

#[test]
fn tampered_mu_fails_the_degree_stage() {
    let r = reproduce_on(&TamperedMu(TriangularGraph::infinite()), &ExampleConfig::reduced(12));
    assert_eq!(r.verdict, Verdict::Fail);
    assert_eq!(r.failing_stages.first().map(String::as_str), Some("degree closed form"));
    let deg = r.stage("degree closed form").unwrap();
    // row 1 is untouched (2k = 2k^{1/2} there)
    assert_eq!(deg.violations, r.config.degree_rows as usize * (r.config.degree_rows as usize + 1) / 2 - 1);
}

#[test]
fn reports_are_reproducible_and_round_trip() {
    let config = ExampleConfig { seed: 9, ..ExampleConfig::reduced(25) };
    let a = reproduce_example(&config);
    let mut b = reproduce_example(&config);
    b.timestamp = Some("1970-01-01T00:00:00Z".into());
    assert_eq!(a.to_json(false).unwrap(), b.to_json(false).unwrap());
    let back: ExampleReport = serde_json::from_str(&b.to_json(true).unwrap()).unwrap();
    assert_eq!(back, b);
    let other = reproduce_example(&ExampleConfig { seed: 10, ..config });
    assert_ne!(a.to_json(false).unwrap(), other.to_json(false).unwrap());
}

#[test]
fn report_is_written_to_the_output_directory() {
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("report-test");
    let r = reproduce_example(&ExampleConfig::reduced(4));
    let path = write_report(&r, &dir).unwrap();
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.contains("\"schema\": \"graphsa/example-report/1\""));
}
