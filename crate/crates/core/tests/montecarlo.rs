mod support;

use kcoverage::montecarlo::{lambda_grid, rows_to_csv, rows_to_json, CSV_HEADER};
use kcoverage::{compare_to_theory, run_experiment, ExperimentConfig, Flavor};

fn config(lambdas: &[f64], runs: usize, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        lambdas: lambdas.to_vec(),
        ..ExperimentConfig::table_one(runs, seed)
    }
}

#[test]
fn rips_is_at_least_cech_in_aggregate() {
    let rows = run_experiment(&config(&[0.15, 0.25, 0.35], 60, 9)).unwrap();
    let (mut rips, mut cech, mut var) = (0.0, 0.0, 0.0);
    for row in &rows {
        match row.flavor {
            Flavor::Rips => rips += row.mean_k(),
            Flavor::Cech => cech += row.mean_k(),
        }
        var += row.stderr().powi(2);
    }
    assert!(rips - cech >= -2.0 * var.sqrt(), "rips {rips}, cech {cech}");
}

#[test]
fn theory_gap_and_ordering() {
    let rows = run_experiment(&config(&lambda_grid(0.05, 0.35, 0.1).unwrap(), 30, 5)).unwrap();
    let cmp = compare_to_theory(&rows).unwrap();
    assert_eq!(cmp.len(), rows.len());
    for c in &cmp {
        if c.theory_mean >= 1.0 {
            assert!(c.gap > 0.0 && c.respects_upper_bound());
        }
    }
    for flavor in Flavor::ALL {
        let means: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.flavor == flavor)
            .map(|r| (r.mean_k(), r.stderr()))
            .collect();
        for w in means.windows(2) {
            let se = (w[0].1.powi(2) + w[1].1.powi(2)).sqrt();
            assert!(w[1].0 >= w[0].0 - 3.0 * se, "{flavor}: {means:?}");
        }
    }
    assert!(compare_to_theory(&[]).is_err());
}

#[test]
fn output_formats() {
    let rows = run_experiment(&config(&[0.2], 4, 1)).unwrap();
    let csv = rows_to_csv(&rows);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    assert_eq!(lines.count(), 2);
    let json: serde_json::Value = serde_json::from_str(&rows_to_json(&rows)).unwrap();
    for row in json.as_array().unwrap() {
        let hist: u64 = row["k_histogram"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_u64().unwrap())
            .sum();
        assert_eq!(hist, 4);
    }
}
