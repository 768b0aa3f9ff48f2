//! Sentences shipped with the library.

/// Locality of a field topology: some neighbourhood `U` is such that, for
/// every nonzero scale, either `x` or `1 - x` is invertible with bounded
/// inverse once `x/c` lands in `U`.
pub const LOCALITY: &str = "exists U forall c != 0 forall V exists e != 0 forall x : \
x/c in U -> 1/(x*e) in V or 1/((1-x)*e) in V";

/// Every neighbourhood of the sum topology contains an intersection of
/// neighbourhoods from the two parts.
pub const GENERATION: &str = "forall U in sum exists V in left exists W in right forall x : \
x in V and x in W -> x in U";

/// Every intersection of part neighbourhoods contains a neighbourhood of the sum.
pub const GENERATION_CONVERSE: &str = "forall V in left forall W in right exists U in sum forall x : \
x in U -> x in V and x in W";
