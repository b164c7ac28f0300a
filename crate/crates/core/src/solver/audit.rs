use crate::instance::Instance;

/// What a recorded reduction promises.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuditKind {
    /// The output has exactly the solutions of the input.
    Solutions,
    /// The output is satisfiable iff the input is.
    Satisfiability,
}

/// One reduction; `after == None` means the input was declared
/// unsatisfiable.
#[derive(Clone, Debug)]
pub struct AuditEvent {
    pub step: &'static str,
    pub kind: AuditKind,
    pub before: Instance,
    pub after: Option<Instance>,
}

#[derive(Clone, Debug, Default)]
pub struct AuditLog {
    pub events: Vec<AuditEvent>,
}

impl AuditLog {
    pub(crate) fn push(&mut self, e: AuditEvent) {
        self.events.push(e);
    }
}
