#include "astpat/pattern.hpp"

namespace astpat {

namespace {

MicroPattern micro(ChangeType ct, KindSpec et, KindSpec pt) {
  return MicroPattern{ct, std::move(et), std::move(pt)};
}

UndesiredChange scoped_parent(MicroPattern what, int anchor) {
  return UndesiredChange{std::move(what), UndesiredChange::Scope::ParentOfMatch, anchor};
}

UndesiredChange scoped_child(MicroPattern what, int anchor) {
  return UndesiredChange{std::move(what), UndesiredChange::Scope::ChildOfMatch, anchor};
}

KindSpec any() { return KindSpec::wildcard(); }
KindSpec of(EntityKind k) { return KindSpec::of(k); }

std::vector<PatternDefinition> build_catalog() {
  using CT = ChangeType;
  using EK = EntityKind;
  const KindSpec jumps = KindSpec::one_of(
      {EK::ReturnStatement, EK::BreakStatement, EK::ContinueStatement});
  const KindSpec loops = KindSpec::one_of({EK::For, EK::While, EK::DoWhile});

  std::vector<PatternDefinition> defs;

  defs.push_back({"IF-CC",
                  "Change of If Condition Expression",
                  {micro(CT::ConditionExpressionChange, of(EK::ConditionExpression), of(EK::If))},
                  {},
                  {}});

  defs.push_back({"MD-ADD",
                  "Addition of a Method Declaration",
                  {micro(CT::AdditionalFunctionality, of(EK::MethodDeclaration), of(EK::Class))},
                  {},
                  {}});

  defs.push_back({"CF-ADD",
                  "Addition of a Class Field",
                  {micro(CT::AdditionalObjectState, of(EK::FieldDeclaration), of(EK::Class))},
                  {},
                  {}});

  // Fires only when the enclosing if is pre-existing: an else arriving as
  // part of a freshly inserted if is just part of that insertion.
  defs.push_back({"IF-ABR",
                  "Addition of an Else Branch",
                  {micro(CT::ElsePartInsert, of(EK::Else), of(EK::If))},
                  {},
                  {scoped_parent(micro(CT::StatementInsert, of(EK::If), any()), 0)}});

  defs.push_back({"MD-CHG",
                  "Change of Method Declaration",
                  {micro(CT::MethodDeclarationChange, of(EK::MethodDeclaration), of(EK::Class))},
                  {},
                  {}});

  defs.push_back({"MD-RMV",
                  "Removal of a Method Declaration",
                  {micro(CT::RemovedFunctionality, of(EK::MethodDeclaration), of(EK::Class))},
                  {},
                  {}});

  defs.push_back({"CF-RMV",
                  "Removal of a Class Field",
                  {micro(CT::RemovedObjectState, of(EK::FieldDeclaration), of(EK::Class))},
                  {},
                  {}});

  defs.push_back({"IF-APCJ",
                  "Addition of Precondition Check with Jump",
                  {micro(CT::StatementInsert, of(EK::If), any()),
                   micro(CT::StatementInsert, of(EK::ReturnStatement), of(EK::If))},
                  {RelationConstraint{RelationConstraint::Kind::ParentOf, 0, 1}},
                  {}});

  defs.push_back({"TY-ARCB-add",
                  "Addition of a Catch Block",
                  {micro(CT::StatementInsert, of(EK::CatchClause), of(EK::Try))},
                  {},
                  {scoped_parent(micro(CT::StatementInsert, of(EK::Try), any()), 0)}});

  // A check whose body jumps straight out belongs to IF-APCJ instead.
  defs.push_back({"IF-APC",
                  "Addition of Precondition Check",
                  {micro(CT::StatementInsert, of(EK::If), any()),
                   micro(CT::StatementInsert, any(), of(EK::If))},
                  {RelationConstraint{RelationConstraint::Kind::ParentOf, 0, 1}},
                  {scoped_child(micro(CT::StatementInsert, jumps, any()), 0)}});

  defs.push_back({"SW-ARSB-add",
                  "Addition of Switch Branch",
                  {micro(CT::StatementInsert, of(EK::SwitchCase), of(EK::Switch))},
                  {},
                  {scoped_parent(micro(CT::StatementInsert, of(EK::Switch), any()), 0)}});

  defs.push_back({"TY-ARCB-rm",
                  "Removal of a Catch Block",
                  {micro(CT::StatementDelete, of(EK::CatchClause), of(EK::Try))},
                  {},
                  {scoped_parent(micro(CT::StatementDelete, of(EK::Try), any()), 0)}});

  defs.push_back({"IF-RMV",
                  "Removal of an If Predicate",
                  {micro(CT::StatementDelete, of(EK::If), any())},
                  {},
                  {}});

  defs.push_back({"LP-CC",
                  "Change of Loop Predicate",
                  {micro(CT::ConditionExpressionChange, of(EK::ConditionExpression), loops)},
                  {},
                  {}});

  defs.push_back({"IF-RBR",
                  "Removal of an Else Branch",
                  {micro(CT::ElsePartDelete, of(EK::Else), of(EK::If))},
                  {},
                  {scoped_parent(micro(CT::StatementDelete, of(EK::If), any()), 0)}});

  defs.push_back({"SW-ARSB-rm",
                  "Removal of Switch Branch",
                  {micro(CT::StatementDelete, of(EK::SwitchCase), of(EK::Switch))},
                  {},
                  {scoped_parent(micro(CT::StatementDelete, of(EK::Switch), any()), 0)}});

  defs.push_back({"TY-ARTC-rm",
                  "Removal of Try Statement",
                  {micro(CT::StatementDelete, of(EK::Try), any())},
                  {},
                  {}});

  defs.push_back({"TY-ARTC-add",
                  "Addition of Try Statement",
                  {micro(CT::StatementInsert, of(EK::Try), any())},
                  {},
                  {}});

  return defs;
}

}  // namespace

const std::vector<PatternDefinition>& builtin_catalog() {
  static const std::vector<PatternDefinition> catalog = build_catalog();
  return catalog;
}

}  // namespace astpat
