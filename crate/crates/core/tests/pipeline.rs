use mcpde::dataio::{read_records, write_records, Bundle, CaseRecord, Layout};
use mcpde::manufactured::{sample_instance, GenConfig, PdeInstance};
use mcpde::metrics::{convergence_slope, masked_metrics, median};
use mcpde::wos::{solve_grid, WosParams};

const RES: usize = 32;

fn instances(cfg: &GenConfig, seed: u64, n: u64) -> Vec<PdeInstance> {
    (0..n).filter_map(|i| sample_instance(cfg, seed, i).ok()).map(|g| g.instance).collect()
}

#[test]
fn generate_solve_write_read_score() {
    let dir = tempfile::tempdir().unwrap();
    let layout = Layout::new(dir.path());
    let cfg = GenConfig { resolution: RES, ..GenConfig::train() };
    let params = WosParams { resolution: RES, ..WosParams::train() };
    let insts = instances(&cfg, 12, 4);
    let recs: Vec<CaseRecord> = insts.iter().map(CaseRecord::from).collect();
    write_records(&layout.records("train"), &recs).unwrap();

    let back = read_records(&layout.records("train")).unwrap();
    assert_eq!(back, recs);
    for (rec, inst) in back.iter().zip(&insts) {
        // The record alone reproduces the instance and its trajectory.
        let again = rec.to_instance().unwrap();
        let traj = solve_grid(&again, &[1, 4, 16], &params, 12).unwrap();
        assert_eq!(traj.fields, solve_grid(inst, &[1, 4, 16], &params, 12).unwrap().fields);
        let (clean, _) = again.ground_truth_grid(RES).unwrap();
        assert_eq!(layout.write_trajectory("train", &again, &traj, &clean, &params, None).unwrap(), 3);

        let meta = layout.read_meta("train", &rec.case_id).unwrap();
        assert_eq!((meta.budgets.as_slice(), meta.resolution), (&[1, 4, 16][..], RES));
        let mses: Vec<(f64, f64)> = [1u32, 4, 16]
            .iter()
            .map(|&b| {
                let bundle = Bundle::read(&layout.bundle("train", &rec.case_id, b)).unwrap();
                assert_eq!(bundle.clean, clean);
                (f64::from(b), masked_metrics(&bundle.noisy, &bundle.clean, &bundle.mask).unwrap().mse)
            })
            .collect();
        let s = convergence_slope(&mses).unwrap();
        assert!((-1.4..=-0.6).contains(&s), "{}: slope {s}", rec.case_id);
    }
}

#[test]
fn fewer_hard_atoms_means_easier_cases() {
    let params = WosParams { resolution: 24, ..WosParams::train() };
    let mse32 = |hard_extra| {
        let cfg = GenConfig { resolution: 24, hard_extra, ..GenConfig::train() };
        let v: Vec<f64> = instances(&cfg, 13, 60)
            .iter()
            .map(|inst| {
                let (clean, mask) = inst.ground_truth_grid(24).unwrap();
                let est = solve_grid(inst, &[32], &params, 13).unwrap().fields.remove(0);
                masked_metrics(&est, &clean, &mask).unwrap().mse
            })
            .collect();
        median(&v)
    };
    let (plain, heavy) = (mse32(0), mse32(GenConfig::train().hard_extra));
    assert!(plain < heavy, "median MSE at B=32: {plain} with hard_extra 0, {heavy} by default");
}
