// Advanced-condition builder: component tree, specializations of the picked
// component, and the information/refinement property panels. Every label and
// value shown comes from the API payloads; nothing is hardcoded.

import type { ApiClient } from "./api.js";
import type {
  AdvancedConditionBody,
  PartTreeNode,
  SearchSchema,
} from "./types.js";

export interface TreeRow {
  iri: string;
  label: string;
  depth: number;
}

export interface InfoPanelRow {
  label: string;
  value: string;
}

export interface RefinementPanelRow {
  property: string;
  label: string;
  candidates: string[];
  chosen: string | null;
}

export class AdvancedConditionBuilder {
  tree: PartTreeNode | null = null;
  schema: SearchSchema | null = null;
  selectedComponent: string | null = null;
  selectedSpecialization: string | null = null;
  private chosen = new Map<string, string>();

  constructor(private api: ApiClient, private rootClass = "Extruder") {}

  async load(): Promise<void> {
    const { tree } = await this.api.partTree(this.rootClass);
    this.tree = tree;
  }

  /** Depth-first rows of the component tree, exactly as served. */
  treeRows(): TreeRow[] {
    if (!this.tree) return [];
    const rows: TreeRow[] = [];
    const walk = (node: PartTreeNode, depth: number) => {
      rows.push({ iri: node.iri, label: node.label, depth });
      for (const child of node.children) walk(child, depth + 1);
    };
    // The root is the machine itself; conditions apply to its components.
    for (const child of this.tree.children) walk(child, 0);
    return rows;
  }

  async selectComponent(iri: string): Promise<void> {
    this.selectedComponent = iri;
    this.selectedSpecialization = null;
    this.chosen.clear();
    this.schema = await this.api.searchSchema(iri);
  }

  specializationOptions(): { iri: string; label: string }[] {
    return this.schema?.specializations ?? [];
  }

  async selectSpecialization(iri: string): Promise<void> {
    if (!this.schema) throw new Error("select a component first");
    const known = this.schema.specializations.some((s) => s.iri === iri);
    if (!known) throw new Error(`not a specialization of the selected component: ${iri}`);
    this.selectedSpecialization = iri;
    this.chosen.clear();
    this.schema = await this.api.searchSchema(iri);
  }

  /** Fixed-value properties: shown for information, mirrored 1:1. */
  infoPanel(): InfoPanelRow[] {
    return (this.schema?.fixed_properties ?? []).map((f) => ({
      label: f.label,
      value: f.value.label,
    }));
  }

  /** Refinement properties the user may constrain, mirrored 1:1. */
  refinementPanel(): RefinementPanelRow[] {
    return (this.schema?.refinement_properties ?? []).map((r) => ({
      property: r.property,
      label: r.label,
      candidates: r.candidates.map((c) => c.label),
      chosen: this.chosen.get(r.property) ?? null,
    }));
  }

  chooseRefinement(property: string, value: string | null): void {
    const entry = this.schema?.refinement_properties.find((r) => r.property === property);
    if (!entry) throw new Error(`unknown refinement property ${property}`);
    if (value === null) {
      this.chosen.delete(property);
      return;
    }
    if (!entry.candidates.some((c) => c.label === value)) {
      throw new Error(`${value} is not a candidate for ${entry.label}`);
    }
    this.chosen.set(property, value);
  }

  /** The condition added to the search: the picked class (specialization
   * when chosen) plus any refinement constraints. */
  toCondition(): AdvancedConditionBody {
    const cls = this.selectedSpecialization ?? this.selectedComponent;
    if (!cls) throw new Error("no component selected");
    return {
      component_class: cls,
      constraints: [...this.chosen.entries()].map(([property, value]) => ({
        property,
        value,
      })),
    };
  }
}
