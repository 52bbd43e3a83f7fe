//! Fit the factor model to a synthetic rank-2 rating matrix and report
//! per-epoch training RMSE and held-out RMSE.
//!
//!     cargo run --release --example train_recommender -- [k] [epochs] [lr] [reg]

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use affectrec::recsys::{train_logged, Hyper};
use affectrec::synth::rank2_ratings;

fn main() -> affectrec::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, d: &str| args.get(i).cloned().unwrap_or_else(|| d.to_string());
    let hyper = Hyper {
        k: arg(0, "2").parse().expect("k"),
        epochs: arg(1, "200").parse().expect("epochs"),
        learning_rate: arg(2, "0.01").parse().expect("lr"),
        regularization: arg(3, "0.02").parse().expect("reg"),
        seed: 11,
        ..Hyper::default()
    };
    let mut ratings = rank2_ratings(200, 100, 0.2, 0.1, 5);
    ratings.shuffle(&mut ChaCha8Rng::seed_from_u64(6));
    let cut = ratings.len() * 9 / 10;
    let (train, test) = ratings.split_at(cut);

    let (model, losses) = train_logged(train, &hyper)?;
    for (e, l) in losses.iter().enumerate() {
        if e < 5 || (e + 1) % 20 == 0 || e + 1 == losses.len() {
            println!("epoch {:>4}  train rmse {l:.4}", e + 1);
        }
    }
    println!("{} train / {} held-out ratings", train.len(), test.len());
    println!("held-out rmse {:.4}", model.rmse(test));
    Ok(())
}
