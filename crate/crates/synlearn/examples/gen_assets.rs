//! Regenerates the bundled asset files (circuits, fault templates,
//! experiment configs) from the library builders, so the JSON on disk
//! can never drift from what the code produces.
//!
//! Run from the crate root: `cargo run --example gen_assets`.

use std::fs;
use std::path::{Path, PathBuf};
use synlearn::circuit::{bacon_shor_circuit, repetition_circuit, rotated_surface_d3, CircuitSpec};
use synlearn::fault::FaultEntry;

fn main() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("assets");
    write_circuits(&root.join("circuits"));
    write_faults(&root.join("faults"));
    write_configs(&root.join("experiments"));
    println!("assets regenerated under {}", root.display());
}

fn write(path: &Path, content: &str) {
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(path, content).unwrap();
    println!("wrote {}", path.display());
}

fn write_circuits(dir: &Path) {
    let named: Vec<(&str, CircuitSpec)> = vec![
        ("repetition_d3_r1.json", repetition_circuit(3, 1).unwrap()),
        ("repetition_d3_r2.json", repetition_circuit(3, 2).unwrap()),
        ("repetition_d3_r3.json", repetition_circuit(3, 3).unwrap()),
        ("repetition_d5_r5.json", repetition_circuit(5, 5).unwrap()),
        ("repetition_d7_r7.json", repetition_circuit(7, 7).unwrap()),
        ("bacon_shor_2x2.json", bacon_shor_circuit(2, 2).unwrap()),
        ("bacon_shor_3x3.json", bacon_shor_circuit(3, 3).unwrap()),
        ("surface_d3_r1.json", rotated_surface_d3().unwrap()),
    ];
    for (name, spec) in named {
        write(&dir.join(name), &spec.to_json().unwrap());
    }
}

/// Uniform single-site template over the given Pauli letters: one entry
/// per (letter, qubit, slice), multiplier 1.
fn site_template(n: usize, t_max: usize, letters: &[char]) -> String {
    let mut entries = Vec::new();
    for t in 0..=t_max {
        for q in 1..=n {
            for &letter in letters {
                entries.push(FaultEntry {
                    pauli: Some(format!("{letter}{q}@t{t}")),
                    slices: None,
                    q: None,
                    multiplier: Some(1.0),
                });
            }
        }
    }
    serde_json::to_string_pretty(&entries).unwrap()
}

fn write_faults(dir: &Path) {
    write(&dir.join("repetition_d3_r1_x.json"), &site_template(3, 2, &['X']));
    write(&dir.join("repetition_d3_r2_x.json"), &site_template(3, 4, &['X']));
    write(&dir.join("repetition_d3_r3_x.json"), &site_template(3, 6, &['X']));
    write(
        &dir.join("repetition_d3_r3_xz.json"),
        &site_template(3, 6, &['X', 'Z']),
    );
    write(
        &dir.join("repetition_d5_r5_x.json"),
        &site_template(5, 10, &['X']),
    );
    write(
        &dir.join("repetition_d7_r7_x.json"),
        &site_template(7, 14, &['X']),
    );
    write(
        &dir.join("surface_d3_r1_xyz.json"),
        &site_template(9, 4, &['X', 'Y', 'Z']),
    );
    // explicit-rate demo model: X everywhere on the one-round repetition
    // instance, rates staggered so no two classes coincide
    let mut entries = Vec::new();
    let mut i = 0u32;
    for t in 0..=2 {
        for q in 1..=3 {
            entries.push(FaultEntry {
                pauli: Some(format!("X{q}@t{t}")),
                slices: None,
                q: Some(0.01 + 0.002 * f64::from(i)),
                multiplier: None,
            });
            i += 1;
        }
    }
    write(
        &dir.join("repetition_d3_r1_rates.json"),
        &serde_json::to_string_pretty(&entries).unwrap(),
    );
}

fn write_configs(dir: &Path) {
    let accuracy = serde_json::json!({
        "circuit": "../circuits/repetition_d3_r3.json",
        "faults": "../faults/repetition_d3_r3_x.json",
        "p_grid": [5e-4],
        "shot_grid": [10_000, 30_000, 100_000, 300_000],
        "trials": 16,
        "seed": 20_260_816,
        "max_order": 4
    });
    write(
        &dir.join("accuracy_vs_shots.json"),
        &serde_json::to_string_pretty(&accuracy).unwrap(),
    );
    let shots_vs_p = serde_json::json!({
        "circuit": "../circuits/repetition_d3_r3.json",
        "faults": "../faults/repetition_d3_r3_x.json",
        "p_grid": [2e-4, 5e-4, 1e-3, 2e-3],
        "shot_grid": [1_000, 3_000, 10_000, 30_000, 100_000, 300_000],
        "tau_target": 0.3,
        "trials": 12,
        "seed": 20_260_817,
        "max_order": 4
    });
    write(
        &dir.join("shots_vs_p.json"),
        &serde_json::to_string_pretty(&shots_vs_p).unwrap(),
    );
    let lep = serde_json::json!({
        "circuit": "../circuits/repetition_d3_r2.json",
        "faults": "../faults/repetition_d3_r2_x.json",
        "p_grid": [5e-4],
        "shot_grid": [30_000, 100_000, 300_000],
        "sampled_shot_grid": [100_000, 400_000, 1_600_000],
        "trials": 16,
        "seed": 20_260_818,
        "rel_err_target": 0.1,
        "max_order": 4,
        "decoder_weight": 3,
        "logical": "0"
    });
    write(
        &dir.join("lep_comparison.json"),
        &serde_json::to_string_pretty(&lep).unwrap(),
    );
}
