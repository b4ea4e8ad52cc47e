import pytest

from extrucat.annotate import set_visible
from extrucat.rdf import INST
from extrucat.stock import InMemoryStockService, ProviderStock
from extrucat.technician import OwnershipError, TechnicianService, UnknownComponentError


# -- owned machines ----------------------------------------------------------------


def test_customer_with_no_machines(demo):
    assert demo.technician.list_owned("c-nobody") == []


def test_owned_view_matches_catalogue_shape(demo):
    owned = demo.technician.list_owned("c-acme")
    catalogue_view = demo.catalogue.get_extruder(INST["E01"])
    mine = next(o for o in owned if o.view.id == catalogue_view.id)
    assert mine.view.to_json() == catalogue_view.to_json()


def test_bought_and_rented_both_listed(demo):
    acquisitions = {o.view.id.rsplit("#", 1)[1]: o.acquisition for o in demo.technician.list_owned("c-acme")}
    assert acquisitions == {"E01": "bought", "E02": "rented"}


def test_ownership_trumps_visibility(demo):
    set_visible(demo.store, INST["E01"], False, demo.config)
    owned = demo.technician.list_owned("c-acme")
    assert any(o.view.id == INST["E01"].value for o in owned)


# -- solution library ------------------------------------------------------------------


def test_solutions_filtered_by_component(demo):
    titles = [s.title for s in demo.technician.solutions_for(INST["E01-motor"])]
    assert titles == ["Motor overheating"]


def test_solution_steps_are_ordered(demo):
    entry = demo.technician.solutions_for(INST["E01-motor"])[0]
    assert len(entry.steps) == 3
    assert entry.steps[0].startswith("Stop the extruder")
    assert entry.steps[-1].startswith("Compare the motor current")


def test_solutions_inherit_from_superclass(demo):
    # The head solution targets the profiles superclass; a circular-profile
    # head instance still sees it.
    titles = [s.title for s in demo.technician.solutions_for(INST["E01-head"])]
    assert "Extrusion head misalignment" in titles


def test_sibling_solutions_never_leak(demo):
    titles = [s.title for s in demo.technician.solutions_for(INST["E01-screw"])]
    assert titles == []


def test_solutions_for_unknown_component(demo):
    with pytest.raises(UnknownComponentError):
        demo.technician.solutions_for(INST["E01-warpdrive"])


# -- tickets --------------------------------------------------------------------------------


def test_open_ticket_with_empty_history(demo):
    ticket = demo.technician.open_ticket("c-acme", INST["E01"], INST["E01-motor"], [])
    assert ticket.status == "open"
    assert ticket.history == []


def test_ticket_preserves_action_history_order(demo):
    history = [
        {"at": 1.0, "action": "viewed-solution", "detail": "sol-motor-overheating"},
        {"at": 2.0, "action": "step-completed", "detail": "step 1"},
        {"at": 3.0, "action": "step-completed", "detail": "step 2"},
    ]
    ticket = demo.technician.open_ticket("c-acme", INST["E01"], INST["E01-motor"], history)
    assert ticket.history == history


def test_reopening_gets_a_fresh_ticket_id(demo):
    t1 = demo.technician.open_ticket("c-acme", INST["E01"], INST["E01-motor"], [])
    t2 = demo.technician.open_ticket("c-acme", INST["E01"], INST["E01-motor"], [])
    assert t1.id != t2.id


def test_ticket_requires_ownership(demo):
    with pytest.raises(OwnershipError):
        demo.technician.open_ticket("c-borealis", INST["E01"], INST["E01-motor"], [])


def test_ticket_log_is_append_only_byte_prefix(demo):
    log_path = demo.data_dir.tickets.path
    demo.technician.open_ticket("c-acme", INST["E01"], INST["E01-motor"], [])
    first = log_path.read_bytes()
    ticket = demo.technician.open_ticket("c-acme", INST["E02"], INST["E02-fan"], [])
    demo.data_dir.tickets.append_action(ticket.id, "escalated", "sent to specialist")
    second = log_path.read_bytes()
    assert second.startswith(first)
    loaded = demo.data_dir.tickets.load(ticket.id)
    assert [h["action"] for h in loaded.history] == ["escalated"]


# -- Algorithm 3: spare parts -------------------------------------------------------------------


def test_warehouse_hit_returns_order(demo):
    result = demo.technician.request_spare_part(INST["E01-screw"])
    assert result.tag == "Order"
    assert result.order.source == "warehouse"
    assert result.order.part_code == "UR-SCR-010"


def test_out_of_stock_without_provider_returns_provider_list(demo):
    result = demo.technician.request_spare_part(INST["E02-fan"])
    assert result.tag == "Providers"
    assert [p.id for p in result.providers] == ["p-alpha", "p-beta"]


def test_out_of_stock_provider_not_in_list_returns_providers(demo):
    result = demo.technician.request_spare_part(INST["E02-fan"], provider_id="p-nope")
    assert result.tag == "Providers"
    assert demo.stock.reservations == []  # no order was placed


def test_out_of_stock_provider_in_list_places_order(demo):
    result = demo.technician.request_spare_part(INST["E02-fan"], provider_id="p-beta")
    assert result.tag == "Order"
    assert result.order.source == "p-beta"


def test_warehouse_precedence_over_provider_argument(demo):
    # Stock on the shelf wins even when the caller names a provider.
    result = demo.technician.request_spare_part(INST["E01-screw"], provider_id="p-alpha")
    assert result.tag == "Order"
    assert result.order.source == "warehouse"


def test_decision_table_covers_every_branch(demo):
    # {warehouse stock?} x {provider arg?} x {provider in list?}
    cases = {
        (True, False, None): ("Order", "warehouse"),
        (True, True, True): ("Order", "warehouse"),
        (True, True, False): ("Order", "warehouse"),
        (False, False, None): ("Providers", None),
        (False, True, True): ("Order", "provider"),
        (False, True, False): ("Providers", None),
    }
    for (stocked, has_arg, in_list), (tag, source) in cases.items():
        stock = InMemoryStockService(
            warehouse={"CODE": 5 if stocked else 0},
            provider_stock=[ProviderStock("p-x", "X Parts", "CODE", 3)],
        )
        technician = TechnicianService(
            demo.store, demo.catalogue, stock, demo.data_dir.ownership,
            demo.data_dir.tickets, demo.config,
        )
        provider = None
        if has_arg:
            provider = "p-x" if in_list else "p-missing"
        # Any known component with part code CODE is enough; reuse the screw
        # by overriding its code via a bespoke stock keyed to its real code.
        stock.warehouse["UR-SCR-010"] = stock.warehouse.pop("CODE")
        stock.provider_stock[0].code = "UR-SCR-010"
        result = technician.request_spare_part(INST["E01-screw"], provider_id=provider)
        assert result.tag == tag, (stocked, has_arg, in_list)
        if tag == "Order":
            expected_source = "warehouse" if source == "warehouse" else "p-x"
            assert result.order.source == expected_source
            assert len(stock.reservations) == 1  # exactly one reservation
        else:
            assert stock.reservations == []  # provider outcomes reserve nothing


def test_unknown_component_rejected(demo):
    with pytest.raises(UnknownComponentError):
        demo.technician.request_spare_part(INST["E01-warpdrive"])


def test_irdi_broadening_when_code_unknown(demo):
    # The motor's own code has no providers, but a provider stocks an
    # equivalent part under the same IRDI.
    result = demo.technician.request_spare_part(INST["E01-motor"])
    assert result.tag == "Providers"
    assert [(p.id, p.via_irdi) for p in result.providers] == [("p-gamma", True)]
    order = demo.technician.request_spare_part(INST["E01-motor"], provider_id="p-gamma")
    assert order.tag == "Order"
    assert order.order.part_code == "GM-AC-MOTOR-7"


def test_no_irdi_means_empty_list(demo):
    # The hopper's warehouse stock is drained first; its type has an IRDI in
    # the mapping file but no provider stocks an equivalent, so the list is
    # empty rather than an error.
    demo.stock.warehouse["UR-HOP-004"] = 0
    result = demo.technician.request_spare_part(INST["E01-hopper"])
    assert result.tag == "Providers"
    assert result.providers == []


def test_provider_service_unreachable_is_distinct_error(demo):
    from extrucat.stock import HttpStockService, StockServiceUnavailable

    technician = TechnicianService(
        demo.store,
        demo.catalogue,
        HttpStockService("http://127.0.0.1:9", timeout=0.2),
        demo.data_dir.ownership,
        demo.data_dir.tickets,
        demo.config,
    )
    with pytest.raises(StockServiceUnavailable):
        technician.request_spare_part(INST["E01-screw"])
