// Spare-part dialog state machine: one request in flight at a time, and the
// outcome renders as exactly one of the two tagged results.

import type { ApiClient } from "./api.js";
import type { ProviderEntry, SparePartResult } from "./types.js";

export type DialogState =
  | { kind: "idle" }
  | { kind: "submitting" }
  | { kind: "order"; orderId: string; source: string; status: string }
  | { kind: "providers"; providers: ProviderEntry[] }
  | { kind: "error"; message: string };

export class SparePartDialog {
  state: DialogState = { kind: "idle" };

  constructor(private api: ApiClient, private component: string) {}

  get busy(): boolean {
    return this.state.kind === "submitting";
  }

  /** Ask for the part; ignored while a request is already in flight. */
  async request(providerId?: string): Promise<DialogState> {
    if (this.busy) return this.state;
    this.state = { kind: "submitting" };
    try {
      const result: SparePartResult = await this.api.requestSparePart(
        this.component,
        providerId,
      );
      this.state =
        result.tag === "Order"
          ? {
              kind: "order",
              orderId: result.order.order_id,
              source: result.order.source,
              status: result.order.status,
            }
          : { kind: "providers", providers: result.providers };
    } catch (error) {
      this.state = { kind: "error", message: (error as Error).message };
    }
    return this.state;
  }

  /** Pick one of the offered providers and order from them. */
  async orderFromProvider(providerId: string): Promise<DialogState> {
    if (this.state.kind !== "providers") {
      throw new Error("no provider list on screen");
    }
    if (!this.state.providers.some((p) => p.id === providerId)) {
      throw new Error(`provider ${providerId} is not in the offered list`);
    }
    return this.request(providerId);
  }

  reset(): void {
    if (!this.busy) this.state = { kind: "idle" };
  }
}
