// JSON contracts of the REST tier. Field names mirror the wire format.

export interface PropertyView {
  label: string;
  value: number;
  unit: string;
  qualifier: "exact" | "minimum" | "maximum";
  measure_type: string | null;
  description: string | null;
}

export interface ModelView {
  file_path: string;
  format: string;
  position: [number, number, number] | number[];
}

export interface ComponentView {
  id: string;
  type_class: string;
  type_label: string;
  label: string;
  properties: PropertyView[];
  model: ModelView | null;
}

export interface ExtruderView {
  id: string;
  name: string;
  manufacturer: string;
  description: string;
  production: string;
  bottles_per_hour: number | null;
  visible: boolean;
  parts: ComponentView[];
}

export interface OwnedExtruder extends ExtruderView {
  acquisition: "bought" | "rented";
}

export interface UnitOption {
  iri: string;
  label: string;
  symbol: string;
}

export interface MeasureTypeOption {
  iri: string;
  label: string;
  units: UnitOption[];
}

export interface PropertyValueRef {
  iri: string | null;
  label: string;
}

export interface FixedProperty {
  property: string;
  label: string;
  value: PropertyValueRef;
}

export interface RefinementProperty {
  property: string;
  label: string;
  candidates: PropertyValueRef[];
}

export interface FormSchema {
  component_class: string;
  label: string;
  basic_fields: string[];
  measure_types: MeasureTypeOption[];
  fixed_properties: FixedProperty[];
  refinement_properties: RefinementProperty[];
}

export interface SearchSchema extends FormSchema {
  specializations: { iri: string; label: string }[];
}

export interface PartTreeNode {
  iri: string;
  label: string;
  children: PartTreeNode[];
}

export interface AdvancedConditionBody {
  component_class: string;
  constraints: { property: string; value: string }[];
}

export interface SearchParamsBody {
  bottle_volume_ml?: number;
  bottle_width_m?: number;
  bottle_height_m?: number;
  bottles_per_day?: number;
  hours_per_day?: number;
  space_width_m?: number;
  space_height_m?: number;
  space_length_m?: number;
  advanced?: AdvancedConditionBody[];
}

export interface OrderReceipt {
  order_id: string;
  status: string;
  part_code: string;
  source: string;
}

export interface ProviderEntry {
  id: string;
  name: string;
  count: number;
  via_irdi: boolean;
  code: string | null;
}

export type SparePartResult =
  | { tag: "Order"; order: OrderReceipt }
  | { tag: "Providers"; providers: ProviderEntry[] };

export interface SolutionEntry {
  id: string;
  title: string;
  steps: string[];
  related_to: string;
}

export interface TicketView {
  id: string;
  customer: string;
  extruder: string;
  component: string;
  status: "open" | "closed";
  history: HistoryEntry[];
}

export interface HistoryEntry {
  action: "viewed-solution" | "step-completed" | "escalated";
  detail: string;
  at?: number;
}

export interface ErrorEnvelope {
  code: string;
  message: string;
  details: unknown;
}

export function localName(iri: string): string {
  const hash = iri.lastIndexOf("#");
  const slash = iri.lastIndexOf("/");
  return iri.slice(Math.max(hash, slash) + 1);
}
