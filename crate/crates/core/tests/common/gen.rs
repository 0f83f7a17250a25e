//! Random valid front words for property tests.

use rand::Rng;

use legendrian_cost::front::{validate_front, Event, EventKind, FrontWord};

/// A random closed one-component word of width at most `max_width`, built
/// by a random walk of `steps` events followed by closing right cusps.
pub fn random_front<R: Rng>(rng: &mut R, steps: usize, max_width: u32) -> FrontWord {
    loop {
        let mut ev = vec![Event::left(1)];
        let mut n = 2u32;
        for _ in 0..steps {
            let mut opts = Vec::new();
            if n + 2 <= max_width {
                for i in 1..=n + 1 {
                    opts.push(Event::left(i));
                }
            }
            for i in 1..n {
                opts.push(Event::cross(i));
                opts.push(Event::cross(i));
                if n > 2 {
                    opts.push(Event::right(i));
                }
            }
            let e = opts[rng.gen_range(0..opts.len())];
            n = e.apply_width(n);
            ev.push(e);
        }
        while n > 0 {
            let i = rng.gen_range(1..n);
            ev.push(Event::new(EventKind::RightCusp, i));
            n -= 2;
        }
        if validate_front(&ev).is_empty() {
            return FrontWord::new(ev).unwrap();
        }
    }
}
