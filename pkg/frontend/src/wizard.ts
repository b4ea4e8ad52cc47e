// Guided search: five production/dimension questions, each skippable. Only
// answered questions contribute fields to the posted search parameters.

import type { AdvancedConditionBody, SearchParamsBody } from "./types.js";

export type QuestionId = "volume" | "size" | "production" | "hours" | "space";

export interface Question {
  id: QuestionId;
  text: string;
  fields: { name: string; label: string; unit: string }[];
}

export const QUESTIONS: Question[] = [
  {
    id: "volume",
    text: "What is the volume of the bottle that you want to produce?",
    fields: [{ name: "volume", label: "Volume", unit: "ml" }],
  },
  {
    id: "size",
    text: "What is the size of the bottle?",
    fields: [
      { name: "width", label: "Width", unit: "m" },
      { name: "height", label: "Height", unit: "m" },
    ],
  },
  {
    id: "production",
    text: "How many bottles would you like to produce?",
    fields: [{ name: "bottles", label: "Bottles per day", unit: "bottles/day" }],
  },
  {
    id: "hours",
    text: "How many hours does your company work per day?",
    fields: [{ name: "hours", label: "Hours", unit: "h" }],
  },
  {
    id: "space",
    text: "What is the available space (in meters) that you have for your new extruder?",
    fields: [
      { name: "width", label: "Width", unit: "m" },
      { name: "height", label: "Height", unit: "m" },
      { name: "length", label: "Length", unit: "m" },
    ],
  },
];

export type Answer = Record<string, number>;

export class SearchWizard {
  private answers = new Map<QuestionId, Answer>();
  private index = 0;
  advanced: AdvancedConditionBody[] = [];

  get current(): Question | null {
    return this.index < QUESTIONS.length ? QUESTIONS[this.index] : null;
  }

  get finished(): boolean {
    return this.index >= QUESTIONS.length;
  }

  answer(values: Answer): void {
    const question = this.current;
    if (!question) throw new Error("wizard already finished");
    for (const field of question.fields) {
      const value = values[field.name];
      if (typeof value !== "number" || !isFinite(value) || value <= 0) {
        throw new Error(`${question.id}: ${field.name} must be a positive number`);
      }
    }
    this.answers.set(question.id, { ...values });
    this.index += 1;
  }

  skip(): void {
    if (!this.current) throw new Error("wizard already finished");
    this.answers.delete(this.current.id);
    this.index += 1;
  }

  back(): void {
    if (this.index > 0) this.index -= 1;
  }

  answered(id: QuestionId): Answer | undefined {
    return this.answers.get(id);
  }

  /** The request body: exactly the answered questions, nothing else. */
  toSearchParams(): SearchParamsBody {
    const params: SearchParamsBody = {};
    const volume = this.answers.get("volume");
    if (volume) params.bottle_volume_ml = volume.volume;
    const size = this.answers.get("size");
    if (size) {
      params.bottle_width_m = size.width;
      params.bottle_height_m = size.height;
    }
    const production = this.answers.get("production");
    if (production) params.bottles_per_day = production.bottles;
    const hours = this.answers.get("hours");
    if (hours) params.hours_per_day = hours.hours;
    const space = this.answers.get("space");
    if (space) {
      params.space_width_m = space.width;
      params.space_height_m = space.height;
      params.space_length_m = space.length;
    }
    if (this.advanced.length) params.advanced = this.advanced;
    return params;
  }

  /** Production volume needs a working-hours answer to become a rate. */
  validate(): string[] {
    const problems: string[] = [];
    if (this.answers.has("production") && !this.answers.has("hours")) {
      problems.push("production rate needs the working-hours question answered too");
    }
    return problems;
  }
}
