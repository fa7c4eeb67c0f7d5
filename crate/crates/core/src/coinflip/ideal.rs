//! The ideal coin functionality.
//!
//! After both parties send START it hands Alice a uniform coin, then waits
//! for her second input. On OK Bob receives the same coin; on REFUSE he
//! receives FAIL.

use rand::Rng;

use super::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondInput {
    Ok,
    Refuse,
}

/// The functionality after START, holding the coin already shown to Alice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PendingCoin {
    coin: bool,
}

impl PendingCoin {
    pub fn start<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self { coin: rng.gen() }
    }

    /// Fixes the coin explicitly, for enumerating the functionality's randomness.
    pub fn with_coin(coin: bool) -> Self {
        Self { coin }
    }

    pub fn alice_output(&self) -> bool {
        self.coin
    }

    pub fn finish(self, second: SecondInput) -> Outcome {
        match second {
            SecondInput::Ok => Outcome::Coin(self.coin),
            SecondInput::Refuse => Outcome::Fail,
        }
    }
}

/// One complete call: START, then `second`; returns (Alice's coin, Bob's output).
pub fn ideal_fcoin<R: Rng + ?Sized>(second: SecondInput, rng: &mut R) -> (bool, Outcome) {
    let pending = PendingCoin::start(rng);
    (pending.alice_output(), pending.finish(second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn refuse_always_fails() {
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        for _ in 0..100 {
            assert_eq!(ideal_fcoin(SecondInput::Refuse, &mut rng).1, Outcome::Fail);
        }
    }

    #[test]
    fn ok_forwards_alice_coin() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..100 {
            let (a, b) = ideal_fcoin(SecondInput::Ok, &mut rng);
            assert_eq!(b, Outcome::Coin(a));
        }
    }

    #[test]
    fn coin_is_fair() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let ones = (0..10_000).filter(|_| ideal_fcoin(SecondInput::Ok, &mut rng).0).count();
        let freq = ones as f64 / 10_000.0;
        assert!((freq - 0.5).abs() <= 0.02, "{freq}");
    }
}
