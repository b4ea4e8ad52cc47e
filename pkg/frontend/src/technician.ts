// Solution walkthrough with step tracking. Every interaction lands in the
// action history, so an escalated ticket hands the technician the full
// trail instead of a blank problem report.

import type { ApiClient } from "./api.js";
import type { HistoryEntry, SolutionEntry, TicketView } from "./types.js";

export class SolutionProgress {
  history: HistoryEntry[] = [];
  private completed = new Set<string>();
  private active: SolutionEntry | null = null;

  constructor(
    private api: ApiClient,
    public extruder: string,
    public component: string,
  ) {}

  viewSolution(solution: SolutionEntry): void {
    this.active = solution;
    this.history.push({ action: "viewed-solution", detail: solution.id, at: Date.now() / 1000 });
  }

  get activeSolution(): SolutionEntry | null {
    return this.active;
  }

  stepKey(solutionId: string, index: number): string {
    return `${solutionId}#${index}`;
  }

  completeStep(index: number): void {
    if (!this.active) throw new Error("no solution on screen");
    if (index < 0 || index >= this.active.steps.length) {
      throw new Error(`no step ${index}`);
    }
    const key = this.stepKey(this.active.id, index);
    if (this.completed.has(key)) return;
    this.completed.add(key);
    this.history.push({
      action: "step-completed",
      detail: this.active.steps[index],
      at: Date.now() / 1000,
    });
  }

  isCompleted(index: number): boolean {
    return this.active !== null && this.completed.has(this.stepKey(this.active.id, index));
  }

  /** Nothing helped: open a ticket carrying the whole action history. */
  async escalate(note: string): Promise<TicketView> {
    this.history.push({ action: "escalated", detail: note, at: Date.now() / 1000 });
    return this.api.openTicket({
      extruder: this.extruder,
      component: this.component,
      history: this.history,
    });
  }
}
