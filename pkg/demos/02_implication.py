"""Decide whether a set of key sets forces another one.

Sigma implies phi when every relation satisfying all of Sigma also
satisfies phi. The decider searches over one-key-per-member choices; a
failing choice yields a concrete two-row counterexample, which we print
and re-validate here. The same machinery embeds 3-SAT, shown at the end.

Run: python3 demos/02_implication.py
"""

from keysets import (
    CnfFormula,
    ImplicationInstance,
    format_keyset,
    from_3sat,
    implies,
    parse_keyset,
    parse_schema,
    satisfiable,
    satisfies,
)

SCHEMA = parse_schema("room,name,address,injury,time")


def ks(text):
    return parse_keyset(text, SCHEMA)


def report(sigma, phi):
    inst = ImplicationInstance(SCHEMA, sigma, phi)
    names = " and ".join(format_keyset(s, SCHEMA) for s in sigma)
    decision = implies(inst)
    print(f"{names}\n  {'implies' if decision.implied else 'does NOT imply'} "
          f"{format_keyset(phi, SCHEMA)}")
    if decision.witness is None:
        return
    w = decision.witness
    print("  counterexample (no key of the goal separates these two rows):")
    for row in w.relation.rows:
        print("   ", tuple("?" if v is None else v for v in row.values))
    for member, key in zip(sigma, w.choice):
        print(f"  member {format_keyset(member, SCHEMA)} separates them only via "
              f"{{{','.join(sorted(SCHEMA.attributes[a] for a in sorted(key)))}}}")
    assert all(satisfies(w.relation, s) for s in sigma)
    assert not satisfies(w.relation, phi)
    print("  (checked: the witness satisfies every premise and violates the goal)")


def main():
    sigma = (ks("{{room,time},{injury,time}}"), ks("{{name,time},{injury,time}}"))

    report(sigma, ks("{{room,name,time},{injury,time}}"))
    print()
    report(sigma, ks("{{room},{name},{address},{time}}"))

    print("\n3-SAT rides on the same decision problem:")
    formula = CnfFormula(
        ("p", "q"),
        (
            frozenset({("p", True), ("q", True)}),
            frozenset({("p", False), ("q", True)}),
            frozenset({("q", False)}),
        ),
    )
    inst = from_3sat(formula)
    implied = implies(inst).implied
    print(f"  formula satisfiable by truth table: {satisfiable(formula)}")
    print(f"  encoded premises imply the clause key set: {implied}")
    print("  (implication holds exactly when the formula is unsatisfiable)")


if __name__ == "__main__":
    main()
