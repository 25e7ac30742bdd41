//! A small experiment plan: run, resume, fit and plot.
//!
//! Records, the CSV projection and SVG plots are written to a temporary
//! directory (or to the directory given as the first argument).

use fracdrum::harness::{self, svg, ExperimentPlan};

fn main() -> fracdrum::Result<()> {
    let tmp = tempfile::tempdir()?;
    let dir = std::env::args().nth(1).map(std::path::PathBuf::from).unwrap_or_else(|| tmp.path().to_path_buf());
    std::fs::create_dir_all(&dir)?;
    let text = format!(
        "schema = 1\nname = interval-rates\ndomain = interval:0,1\nalpha = 0.7, 1.5\n\
         t_min = 1e-3\nt_max = 1e-1\nper_decade = 4\nestimators = rhc, shc\nn = 20000\nseed = 1\n\
         output = {}\n",
        dir.join("rates.jsonl").display()
    );
    let plan = ExperimentPlan::parse(&text)?;
    let run = harness::run_plan(&plan, &mut |cell, rec| {
        eprintln!("{:>4} α={} t={:.2e} deficit={:?}", cell.estimator.name(), cell.alpha, cell.t, rec.deficit());
    })?;
    println!("computed {}, skipped {}, failed {}", run.computed, run.skipped, run.failed);
    let again = harness::run_plan(&plan, &mut |_, _| {})?;
    println!("rerun: computed {}, skipped {}", again.computed, again.skipped);

    let domain = plan.domain.clone();
    let mut fits = Vec::new();
    let mut series = Vec::new();
    for &est in &plan.estimators {
        for &alpha in &plan.alphas {
            let recs = harness::select(&run.records, est, alpha);
            let fit = harness::fit_power_exponent(&recs)?;
            series.push(svg::Series {
                label: format!("{} α={alpha}", est.name()),
                points: harness::deficit_points(&recs),
                fit: Some((fit.exponent, fit.amplitude)),
            });
            fits.push((est, alpha, fit));
        }
    }
    println!("{}", harness::compare_rates(&domain, &fits));
    let plot = dir.join("rates.deficits.svg");
    std::fs::write(&plot, svg::deficit_plot("interval deficits", &series))?;
    println!("plot written to {}", plot.display());
    Ok(())
}
