use std::collections::HashMap;

use super::syntax::Op;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fixity {
    Prefix,
    Infix,
    Postfix,
    Binder,
    Bracket,
}

/// What a table entry is attached to in the surface syntax.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NotationKind {
    Op(Op),
    Forall,
    Exists,
    Class,
    /// Arrows and set builders expand to kernel binders, not constants.
    Builtin,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotationEntry {
    pub symbol: &'static str,
    pub kind: NotationKind,
    pub fixity: Fixity,
    /// Printing and parsing level; larger binds tighter.
    pub precedence: u8,
    /// Number of operands written at a use site.
    pub arity: usize,
    /// Parameter positions filled by the operands, in operand order.
    /// `None` means the last `arity` parameters.
    pub slots: Option<&'static [usize]>,
    /// Every parameter is implicit and the operands are applied to the
    /// saturated constant, as for a relation-valued definition.
    pub applied: bool,
    /// Constant the symbol stands for, once a script binds it.
    pub target: Option<String>,
}

/// The fixed notation table. Scripts bind each symbol to its constant with
/// a `notation` step; until then the symbol is unusable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotationTable {
    entries: Vec<NotationEntry>,
    by_symbol: HashMap<&'static str, usize>,
}

const CLASS_SLOTS: &[usize] = &[3, 1];

impl Default for NotationTable {
    fn default() -> Self {
        NotationTable::standard()
    }
}

impl NotationTable {
    pub fn standard() -> NotationTable {
        use Fixity::*;
        use NotationKind as K;
        let row = |symbol, kind, fixity, precedence, arity| NotationEntry {
            symbol,
            kind,
            fixity,
            precedence,
            arity,
            slots: None,
            applied: false,
            target: None,
        };
        let mut entries = vec![
            row("->", K::Builtin, Infix, 1, 2),
            row("=>", K::Builtin, Infix, 1, 2),
            row("{|}", K::Builtin, Bracket, 10, 2),
            row("<=>", K::Op(Op::Iff), Infix, 1, 2),
            row("/\\", K::Op(Op::And), Infix, 2, 2),
            row("\\/", K::Op(Op::Or), Infix, 2, 2),
            row("=", K::Op(Op::Equal), Infix, 3, 3),
            row("==", K::Op(Op::ExtEqual), Infix, 3, 2),
            row("<=", K::Op(Op::SubRel), Infix, 3, 2),
            row("sub", K::Op(Op::Subset), Infix, 3, 2),
            row("eps", K::Op(Op::Elem), Infix, 3, 2),
            row("<", K::Op(Op::Less), Infix, 3, 2),
            row("|", K::Op(Op::Union), Infix, 4, 2),
            row("&", K::Op(Op::Intersect), Infix, 5, 2),
            row("o", K::Op(Op::Compose), Infix, 6, 2),
            row("~", K::Op(Op::Not), Prefix, 7, 1),
            row("^-1", K::Op(Op::Converse), Postfix, 9, 1),
            row("forall", K::Forall, Binder, 0, 2),
            row("exists", K::Exists, Binder, 0, 2),
            row("[]_", K::Class, Bracket, 9, 2),
        ];
        for e in &mut entries {
            if e.kind == K::Class {
                e.slots = Some(CLASS_SLOTS);
            }
            if e.kind == K::Op(Op::Less) {
                e.applied = true;
            }
        }
        let by_symbol = entries.iter().enumerate().map(|(i, e)| (e.symbol, i)).collect();
        NotationTable { entries, by_symbol }
    }

    pub fn entries(&self) -> &[NotationEntry] {
        &self.entries
    }

    pub fn get(&self, symbol: &str) -> Option<&NotationEntry> {
        self.by_symbol.get(symbol).map(|&i| &self.entries[i])
    }

    pub fn for_kind(&self, kind: NotationKind) -> &NotationEntry {
        self.entries.iter().find(|e| e.kind == kind).expect("every notation kind has an entry")
    }

    /// Binds `symbol` to `target`. Returns false for unknown or built-in
    /// symbols.
    pub fn bind(&mut self, symbol: &str, target: &str) -> bool {
        match self.by_symbol.get(symbol) {
            Some(&i) if self.entries[i].kind != NotationKind::Builtin => {
                self.entries[i].target = Some(target.to_string());
                true
            }
            _ => false,
        }
    }

    pub fn target(&self, kind: NotationKind) -> Option<&str> {
        self.for_kind(kind).target.as_deref()
    }

    /// Bound symbols and their targets, in table order.
    pub fn bindings(&self) -> Vec<(&'static str, String)> {
        self.entries.iter().filter_map(|e| e.target.clone().map(|t| (e.symbol, t))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn symbols_are_unique_per_fixity() {
        let t = NotationTable::standard();
        let mut seen = HashSet::new();
        for e in t.entries() {
            assert!(seen.insert((e.symbol, e.fixity)), "duplicate {}", e.symbol);
        }
    }

    #[test]
    fn binding_is_required_and_builtins_are_fixed() {
        let mut t = NotationTable::standard();
        assert_eq!(t.target(NotationKind::Op(Op::Compose)), None);
        assert!(t.bind("o", "comp"));
        assert_eq!(t.target(NotationKind::Op(Op::Compose)), Some("comp"));
        assert!(!t.bind("->", "foo"));
        assert!(!t.bind("??", "foo"));
    }
}
