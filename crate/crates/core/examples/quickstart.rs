//! Minimal tour: synthesize a certified structure, run a protocol, and
//! audit the agreement⇒accuracy bound at the measured agreement level.

use agreement_lab::{
    audit_agreement_accuracy, random_one_sided_substitutes_structure, rectangle_check,
    run_discretized_quadratic, BregmanGenerator, CheckMode, ProtocolKind,
};

fn main() -> agreement_lab::Result<()> {
    let s = random_one_sided_substitutes_structure(4, 4, 1)?;
    let g = BregmanGenerator::squared();

    let report = rectangle_check(&s, &g, CheckMode::Rectangle)?;
    assert!(report.holds, "the synthesized corpus is certified");

    let t = run_discretized_quadratic(&s, 0.01)?;
    println!(
        "{}: stopped after {} rounds, {} bits",
        s.label().unwrap_or("unlabeled"),
        t.t_end,
        t.bits
    );

    let audit = audit_agreement_accuracy(&s, &g, ProtocolKind::DiscretizedQuadratic, 0.01)?;
    assert!(audit.satisfied);
    println!(
        "agreement {:.3e} ⇒ accuracy {:.3e} ≤ bound {:.3e}",
        audit.epsilon_measured,
        audit.accuracy_alice.max(audit.accuracy_bob),
        audit.bound
    );
    Ok(())
}
