// Steinhaus distance between equal balls: closed form against sampling.

use cover_filtration::geometry::{
    ball_steinhaus_nd, cech_birth_1d, monte_carlo_steinhaus, steinhaus_birth_1d, steinhaus_from_cech_1d, BallCover,
    MonteCarloConfig,
};

pub fn main() -> cover_filtration::Result<()> {
    println!("d/2R   n=1     n=2     n=3     n=4");
    for i in 0..=10 {
        let d = 2.0 * i as f64 / 10.0;
        let row: Vec<String> = (1..=4)
            .map(|n| ball_steinhaus_nd(n, 1.0, d).map(|v| format!("{v:.4}")))
            .collect::<cover_filtration::Result<_>>()?;
        println!("{:.1}    {}", d / 2.0, row.join("  "));
    }

    let balls = BallCover::new(vec![vec![0.0, 0.0, 0.0], vec![0.7, 0.0, 0.0]], 1.0)?;
    let est = monte_carlo_steinhaus(&balls, &[0, 1], &MonteCarloConfig::new(200_000, 1))?;
    let exact = ball_steinhaus_nd(3, 1.0, 0.7)?;
    println!(
        "R^3, distance 0.7: exact {exact:.5}, sampled {:.5} +/- {:.5}",
        est.estimate, est.std_error
    );

    // on the line the two filtrations determine each other
    let points = [0.0, 0.4, 1.1];
    let cech = cech_birth_1d(&points)?;
    let steinhaus = steinhaus_birth_1d(&points, 1.0)?;
    println!("points {points:?}: cech {cech:.4}, steinhaus {steinhaus:.4} = {:.4}", steinhaus_from_cech_1d(cech, 1.0));
    Ok(())
}
