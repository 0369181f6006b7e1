//! Property tests for the calculus invariants: round-tripping, decoration
//! monotonicity, profile monotonicity, the pure-fragment coincidence, and
//! decoration soundness of the models.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use deckit_core::calculus::{check_formation, infer_decoration, typecheck};
use deckit_core::exc::ExcEnv;
use deckit_core::profile::ProfileName;
use deckit_core::soundness::generate::{gen_syntactic_term, TermGen};
use deckit_core::st::StEnv;
use deckit_core::syntax::{parse_core_term_str, parse_theory};
use deckit_core::term::Term;
use deckit_core::theory::Theory;
use deckit_core::types::Decoration;
use deckit_core::{DEFAULT_MAX_CARRIER, DEFAULT_MAX_STATES};

fn demo() -> Theory {
    parse_theory(
        r#"
theory demo exceptions logic EXC_PLUS
type Bool = {tt, ff}
exception T of {a, b}
exception R of {c}
op f : Bool -> Bool deco 1 { tt => ok ff, ff => raise T a }
op flip : V_T -> V_T deco 0 { a => b, b => a }
op mend : V_T -> Bool deco 1 { a => ok tt, b => ok ff }
"#,
    )
    .unwrap()
}

fn counter() -> Theory {
    parse_theory(
        r#"
theory counter states logic ST_PLUS
type Bool = {tt, ff}
location X of {0, 1}
location Y of {u, v}
"#,
    )
    .unwrap()
}

proptest! {
    /// parse . pretty is the identity on generated syntax trees.
    #[test]
    fn round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for profile in deckit_core::profile::ALL_PROFILES {
            let t = gen_syntactic_term(&mut rng, profile, 4);
            let printed = t.to_string();
            let reparsed = parse_core_term_str(&printed)
                .unwrap_or_else(|e| panic!("`{printed}` does not reparse: {e}"));
            prop_assert_eq!(reparsed, t);
        }
    }

    /// Every direct subterm has a decoration at most the whole term's,
    /// except under the propagator composition, whose outer factor may
    /// sit strictly above the composite.
    #[test]
    fn decoration_monotonicity(seed in any::<u64>()) {
        let th = demo();
        let gen = TermGen::new(&th);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let src = gen.random_type(&mut rng);
        let tgt = gen.random_type(&mut rng);
        if let Some(t) = gen.gen_typed(&mut rng, &src, &tgt, Decoration::D2, 4) {
            for (path, s) in t.subterms() {
                let d_whole = infer_decoration(s, &th).unwrap();
                for (i, c) in s.children().into_iter().enumerate() {
                    let d_child = infer_decoration(c, &th).unwrap();
                    let exempt = matches!(s, Term::PropComp(..)) && i == 0;
                    prop_assert!(
                        exempt || d_child <= d_whole,
                        "child {i} of {s} at {path:?} has {d_child} > {d_whole}"
                    );
                }
            }
        }
    }

    /// Terms formation-valid under MON stay valid under EXC and EXC_PLUS;
    /// likewise COMON -> ST -> ST_PLUS.
    #[test]
    fn profile_monotonicity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let demo = demo();
        let counter = counter();
        for (theory, chain) in [
            (&demo, [ProfileName::Mon, ProfileName::Exc, ProfileName::ExcPlus]),
            (&counter, [ProfileName::Comon, ProfileName::St, ProfileName::StPlus]),
        ] {
            let mut th = theory.clone();
            th.profile = chain[0];
            let gen = TermGen::new(&th);
            let src = gen.random_type(&mut rng);
            let tgt = gen.random_type(&mut rng);
            if let Some(t) = gen.gen_typed(&mut rng, &src, &tgt, Decoration::D2, 4) {
                prop_assert!(check_formation(&t, chain[0], &th).unwrap().is_empty());
                for wider in &chain[1..] {
                    prop_assert!(
                        check_formation(&t, *wider, &th).unwrap().is_empty(),
                        "{t} valid under {} but not {wider}", chain[0]
                    );
                }
            }
        }
    }

    /// Within the effect-free grammar, formation validity under EQ
    /// coincides with having decoration 0.
    #[test]
    fn eq_coincides_with_the_pure_fragment(seed in any::<u64>()) {
        let th = demo();
        let gen = TermGen::new(&th);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let src = gen.random_type(&mut rng);
        let tgt = gen.random_type(&mut rng);
        let Some(t) = gen.gen_typed(&mut rng, &src, &tgt, Decoration::D2, 3) else { return Ok(()) };
        // restrict to the conditional-equational grammar
        let in_eq_grammar = t.subterms().iter().all(|(_, s)| !matches!(
            s,
            Term::PropComp(..) | Term::Tag(_) | Term::Untag(_) | Term::UntagAll
                | Term::Lookup(_) | Term::Update(_)
        ));
        if in_eq_grammar {
            let valid = check_formation(&t, ProfileName::Eq, &th).unwrap().is_empty();
            let pure = infer_decoration(&t, &th).unwrap() == Decoration::D0;
            prop_assert_eq!(valid, pure, "term {}", t);
        }
    }

    /// Decoration soundness on the exception side: the denotation of a
    /// term is within its inferred decoration; in particular every term
    /// of decoration <= 1 fixes every packet.
    #[test]
    fn exception_decoration_soundness(seed in any::<u64>()) {
        let th = demo();
        let env = ExcEnv::new(&th, DEFAULT_MAX_CARRIER).unwrap();
        let gen = TermGen::new(&th);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let src = gen.random_type(&mut rng);
        let tgt = gen.random_type(&mut rng);
        if let Some(t) = gen.gen_typed(&mut rng, &src, &tgt, Decoration::D2, 4) {
            let den = env.eval(&t).unwrap();
            let inferred = infer_decoration(&t, &th).unwrap();
            prop_assert!(den.min_deco <= inferred, "{t}: {} > {inferred}", den.min_deco);
            if inferred <= Decoration::D1 {
                let n = den.packet_count();
                for k in 0..n {
                    prop_assert_eq!(den.table[den.src_ord + k], den.tgt_ord + k);
                }
            }
        }
    }

    /// Decoration soundness on the state side: terms of decoration <= 1
    /// preserve the state, pure terms ignore it.
    #[test]
    fn state_decoration_soundness(seed in any::<u64>()) {
        let th = counter();
        let env = StEnv::new(&th, DEFAULT_MAX_CARRIER, DEFAULT_MAX_STATES).unwrap();
        let gen = TermGen::new(&th);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let src = gen.random_type(&mut rng);
        let tgt = gen.random_type(&mut rng);
        if let Some(t) = gen.gen_typed(&mut rng, &src, &tgt, Decoration::D2, 4) {
            let den = env.eval(&t).unwrap();
            let inferred = infer_decoration(&t, &th).unwrap();
            prop_assert!(den.min_deco <= inferred, "{t}: {} > {inferred}", den.min_deco);
        }
    }

    /// Typing uniqueness: typecheck is a function of the term.
    #[test]
    fn typing_is_deterministic(seed in any::<u64>()) {
        let th = demo();
        let gen = TermGen::new(&th);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let src = gen.random_type(&mut rng);
        let tgt = gen.random_type(&mut rng);
        if let Some(t) = gen.gen_typed(&mut rng, &src, &tgt, Decoration::D2, 4) {
            let a = typecheck(&t, &th).unwrap();
            let b = typecheck(&t, &th).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
