// Dynamic component form, rendered purely from the served schema: the
// measure-type select drives which units the unit select offers, and a
// feature row never leaves the form with a unit outside that list.

import type { FormSchema, MeasureTypeOption, UnitOption } from "./types.js";

export interface FeatureRow {
  measure_type: string;
  unit: string;
  value: number;
  qualifier: "exact" | "minimum" | "maximum";
  description?: string;
}

export class ComponentFormModel {
  features: FeatureRow[] = [];
  basic: Record<string, string> = {};

  constructor(public schema: FormSchema) {
    for (const field of schema.basic_fields) this.basic[field] = "";
  }

  basicFields(): string[] {
    return [...this.schema.basic_fields];
  }

  measureTypeOptions(): MeasureTypeOption[] {
    return this.schema.measure_types;
  }

  /** Units offered once a measure type is picked: that type's list only. */
  unitOptionsFor(measureTypeIri: string): UnitOption[] {
    const entry = this.schema.measure_types.find((m) => m.iri === measureTypeIri);
    return entry ? entry.units : [];
  }

  addFeature(row: FeatureRow): void {
    const units = this.unitOptionsFor(row.measure_type);
    if (!units.length) {
      throw new Error(`measure type not applicable to ${this.schema.label}: ${row.measure_type}`);
    }
    if (!units.some((u) => u.iri === row.unit)) {
      throw new Error(`unit ${row.unit} is not allowed for this measure type`);
    }
    if (!isFinite(row.value)) {
      throw new Error("feature value must be finite");
    }
    this.features.push({ ...row });
  }

  removeFeature(index: number): void {
    this.features.splice(index, 1);
  }

  toComponentBody(localId: string, label: string, partCode?: string) {
    return {
      local_id: localId,
      component_type: this.schema.component_class,
      label,
      part_code: partCode ?? null,
      features: this.features.map((f) => ({
        measure_type: f.measure_type,
        unit: f.unit,
        value: f.value,
        qualifier: f.qualifier,
        description: f.description ?? null,
      })),
    };
  }
}
