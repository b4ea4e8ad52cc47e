// Typed client for the JSON API. The fetch implementation is injectable so
// contract tests can run against canned payloads.

import type {
  ErrorEnvelope,
  ExtruderView,
  FormSchema,
  OwnedExtruder,
  PartTreeNode,
  SearchParamsBody,
  SearchSchema,
  SolutionEntry,
  SparePartResult,
  TicketView,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public envelope: ErrorEnvelope,
  ) {
    super(envelope.message);
  }
}

export interface ApiClientOptions {
  baseUrl?: string;
  token?: string | null;
  fetchImpl?: FetchLike;
}

export class ApiClient {
  baseUrl: string;
  token: string | null;
  private fetchImpl: FetchLike;

  constructor(options: ApiClientOptions = {}) {
    this.baseUrl = (options.baseUrl ?? "").replace(/\/$/, "");
    this.token = options.token ?? null;
    this.fetchImpl = options.fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const response = await this.fetchImpl(this.baseUrl + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, payload as ErrorEnvelope);
    }
    return payload as T;
  }

  // anonymous surface
  listExtruders(): Promise<{ extruders: ExtruderView[] }> {
    return this.request("GET", "/api/extruders");
  }

  search(params: SearchParamsBody): Promise<{ params: unknown; extruders: ExtruderView[] }> {
    return this.request("POST", "/api/search", params);
  }

  searchSchema(cls: string): Promise<SearchSchema> {
    return this.request("GET", `/api/search/schema/${encodeURIComponent(cls)}`);
  }

  partTree(cls: string): Promise<{ tree: PartTreeNode; warnings: string[] }> {
    return this.request("GET", `/api/parttree/${encodeURIComponent(cls)}`);
  }

  submitInfoRequest(body: {
    name: string;
    email: string;
    message: string;
    extruder: string;
    search_params?: SearchParamsBody;
  }): Promise<{ id: string }> {
    return this.request("POST", "/api/info-requests", body);
  }

  // customer surface
  myExtruders(): Promise<{ extruders: OwnedExtruder[] }> {
    return this.request("GET", "/api/my/extruders");
  }

  solutionsFor(component: string): Promise<{ solutions: SolutionEntry[] }> {
    return this.request("GET", `/api/solutions/${encodeURIComponent(component)}`);
  }

  openTicket(body: {
    extruder: string;
    component: string;
    history: unknown[];
  }): Promise<TicketView> {
    return this.request("POST", "/api/tickets", body);
  }

  requestSparePart(component: string, providerId?: string): Promise<SparePartResult> {
    return this.request("POST", "/api/spare-parts", {
      component,
      provider_id: providerId ?? null,
    });
  }

  // admin surface
  formSchema(cls: string): Promise<FormSchema> {
    return this.request("GET", `/api/admin/form-schema/${encodeURIComponent(cls)}`);
  }

  createExtruder(body: unknown): Promise<{ id: string; revision: number }> {
    return this.request("POST", "/api/admin/extruders", body);
  }

  setVisible(extruder: string, visible: boolean): Promise<{ revision: number }> {
    return this.request("PATCH", `/api/admin/extruders/${encodeURIComponent(extruder)}/visible`, {
      visible,
    });
  }

  deleteExtruder(extruder: string): Promise<{ revision: number }> {
    return this.request("DELETE", `/api/admin/extruders/${encodeURIComponent(extruder)}`);
  }

  cadDocuments(): Promise<{ documents: unknown[] }> {
    return this.request("GET", "/api/admin/cad/documents");
  }

  cadImport(body: {
    component: string;
    document: string;
    element: string;
    format?: string;
    position?: [number, number, number];
  }): Promise<{ revision: number; path: string }> {
    return this.request("POST", "/api/admin/cad/import", body);
  }

  runSync(): Promise<{ updated: string[]; skipped: string[]; failed: unknown[] }> {
    return this.request("POST", "/api/admin/sync", {});
  }
}
