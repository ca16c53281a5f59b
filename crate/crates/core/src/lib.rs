//! Absorbing-method search for powers of Hamilton cycles in `G(n, p)` and
//! tight Hamilton cycles in `G^(k+1)(n, p)`, with the supporting density,
//! Janson, matching and absorber machinery.
//!
//! Every cycle returned by [`pipeline::find_hamilton`] has passed
//! [`certificate::verify_certificate`] against the input host.

pub mod absorber;
pub mod bipartite;
pub mod certificate;
pub mod combinatorics;
pub mod cover;
pub mod density;
pub mod embedding;
pub mod error;
pub mod experiment;
pub mod factor;
pub mod hypergraph;
pub mod janson;
pub mod matcher;
pub mod pipeline;
pub mod random;
pub mod templates;

pub use certificate::{verify_certificate, CycleCertificate};
pub use embedding::{is_embedding, Embedding, VertexSet, VertexTuple};
pub use error::{Error, Result};
pub use hypergraph::Hypergraph;
pub use pipeline::{find_hamilton, Input, Parameters};
pub use templates::Mode;
