//! Ways of producing nets: proof terms, simply typed lambda terms and
//! parametric families.

mod corpus;
mod elaborate;
mod families;
mod lambda;
mod proof_term;

pub use corpus::{
    lambda_fixtures, proof_term_corpus, sampled_corpus, subsystem_fixture_terms,
    subsystem_fixtures, CorpusEntry, LAMBDA_FIXTURES,
};
pub use elaborate::{elaborate, elaborate_in, elaborate_with_sequent, infer_system};
pub use families::{copy_example, dr_ladder, gen_family, jump_example, FAMILIES};
pub use lambda::{
    from_lambda, lambda_to_proof_term, parse_lambda, type_of, LambdaTerm, Type, Typing,
};
pub use proof_term::{parse_proof_term, ProofTerm};
