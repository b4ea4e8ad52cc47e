from extrucat.rdf import IRI, TripleStore
from extrucat.sparql import (
    Inverse,
    Pred,
    Query,
    Sequence,
    TriplePattern,
    Var,
    ZeroOrMore,
    evaluate,
    parse_query,
)

X = "http://x/"


def _store(turtle: str) -> TripleStore:
    store = TripleStore()
    store.load_turtle("@prefix : <http://x/> .\n" + turtle)
    return store


def test_zero_or_more_includes_zero_step():
    # A node with no rdf:rest edges still reaches itself.
    store = _store(":n :other :m .")
    query = parse_query(
        "PREFIX : <http://x/> PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> "
        "SELECT ?x WHERE { ?x rdf:rest* ?x }"
    )
    rows = evaluate(store.snapshot(), query).rows
    assert {r["x"] for r in rows} >= {IRI(X + "n"), IRI(X + "m")}


def test_zero_step_applies_to_constant_outside_graph():
    store = _store(":a :p :b .")
    query = parse_query("PREFIX : <http://x/> SELECT ?x WHERE { :ghost :p* ?x }")
    rows = evaluate(store.snapshot(), query).rows
    assert rows == [{"x": IRI(X + "ghost")}]


def test_sequence_path_counts_intermediates():
    store = _store(":a :p :m1 . :a :p :m2 . :m1 :q :b . :m2 :q :b .")
    query = parse_query("PREFIX : <http://x/> SELECT ?a ?b WHERE { ?a :p/:q ?b }")
    rows = evaluate(store.snapshot(), query).rows
    assert len(rows) == 2  # one per intermediate, bag semantics
    assert all(r == {"a": IRI(X + "a"), "b": IRI(X + "b")} for r in rows)


def test_inverse_path():
    store = _store(":a :p :b .")
    query = parse_query("PREFIX : <http://x/> SELECT ?s WHERE { ?s ^:p :a }")
    assert evaluate(store.snapshot(), query).rows == [{"s": IRI(X + "b")}]


def test_star_handles_cycles():
    store = _store(":a :p :b . :b :p :c . :c :p :a .")
    query = parse_query("PREFIX : <http://x/> SELECT ?x WHERE { :a :p* ?x }")
    rows = evaluate(store.snapshot(), query).rows
    assert {r["x"].local_name for r in rows} == {"a", "b", "c"}


def test_filter_drops_rows_without_crashing_on_unbound():
    store = _store(':a :p 5 . :b :p "text" .')
    query = parse_query(
        "PREFIX : <http://x/> SELECT ?s ?v WHERE { ?s :p ?v . FILTER(?v > 3) }"
    )
    rows = evaluate(store.snapshot(), query).rows
    assert [r["s"].local_name for r in rows] == ["a"]  # the string row is dropped


def test_numeric_coercion_across_datatypes():
    store = _store(
        ':a :p "5"^^<http://www.w3.org/2001/XMLSchema#integer> . '
        ':b :p "5.0"^^<http://www.w3.org/2001/XMLSchema#double> .'
    )
    query = parse_query("PREFIX : <http://x/> SELECT ?s WHERE { ?s :p ?v . FILTER(?v = 5) }")
    rows = evaluate(store.snapshot(), query).rows
    assert {r["s"].local_name for r in rows} == {"a", "b"}


def test_join_on_shared_variable():
    store = _store(":a :p :b . :b :q :c . :x :p :y .")
    query = parse_query("PREFIX : <http://x/> SELECT ?a ?c WHERE { ?a :p ?b . ?b :q ?c }")
    assert evaluate(store.snapshot(), query).rows == [
        {"a": IRI(X + "a"), "c": IRI(X + "c")}
    ]


def test_projection_may_duplicate_rows():
    store = _store(":s :p :o1 . :s :p :o2 .")
    query = parse_query("PREFIX : <http://x/> SELECT ?s WHERE { ?s :p ?o }")
    rows = evaluate(store.snapshot(), query).rows
    assert len(rows) == 2 and all(r == {"s": IRI(X + "s")} for r in rows)


def test_inverse_involution_equivalence():
    store = _store(":a :p :b . :b :p :c .")
    plain = Query({}, None, [TriplePattern(Var("s"), Pred(IRI(X + "p")), Var("o"))])
    doubled = Query(
        {}, None, [TriplePattern(Var("s"), Inverse(Inverse(Pred(IRI(X + "p")))), Var("o"))]
    )
    assert evaluate(store.snapshot(), plain).same_rows(evaluate(store.snapshot(), doubled))


def test_star_idempotence():
    store = _store(":a :p :b . :b :p :c . :c :p :a . :d :q :a .")
    once = Query({}, None, [TriplePattern(Var("s"), ZeroOrMore(Pred(IRI(X + "p"))), Var("o"))])
    twice = Query(
        {},
        None,
        [TriplePattern(Var("s"), ZeroOrMore(ZeroOrMore(Pred(IRI(X + "p")))), Var("o"))],
    )
    assert evaluate(store.snapshot(), once).same_rows(evaluate(store.snapshot(), twice))


def test_adding_triples_never_removes_rows_from_filterless_bgp():
    store = _store(":a :p :b . :b :q :c .")
    query = parse_query("PREFIX : <http://x/> SELECT ?a ?c WHERE { ?a :p ?b . ?b :q ?c }")
    before = evaluate(store.snapshot(), query).as_multiset()
    store.load_turtle("@prefix : <http://x/> . :z :p :b . :b :q :w .")
    after = evaluate(store.snapshot(), query).as_multiset()
    assert all(after[row] >= count for row, count in before.items())


def test_evaluation_order_independence():
    # Same patterns in every permutation give the same multiset.
    import itertools

    store = _store(":a :p :b . :b :q :c . :c :r 4 . :a :p :b2 . :b2 :q :c .")
    patterns = [
        TriplePattern(Var("a"), Pred(IRI(X + "p")), Var("b")),
        TriplePattern(Var("b"), Pred(IRI(X + "q")), Var("c")),
        TriplePattern(Var("c"), Pred(IRI(X + "r")), Var("v")),
    ]
    results = []
    for perm in itertools.permutations(patterns):
        q = Query({}, None, list(perm))
        results.append(evaluate(store.snapshot(), q).as_multiset())
    assert all(r == results[0] for r in results)
