// Mocked-fetch plumbing for contract tests: canned payloads in, recorded
// requests out.

import type { FetchLike } from "../src/api.js";
import type {
  FormSchema,
  PartTreeNode,
  SearchSchema,
} from "../src/types.js";

export interface RecordedRequest {
  method: string;
  path: string;
  body: unknown;
}

export interface MockRoute {
  method: string;
  path: string | RegExp;
  status?: number;
  reply: unknown | ((request: RecordedRequest) => unknown);
}

export function mockFetch(routes: MockRoute[]): {
  fetchImpl: FetchLike;
  requests: RecordedRequest[];
} {
  const requests: RecordedRequest[] = [];
  const fetchImpl: FetchLike = async (input, init) => {
    const url = new URL(input, "http://mock.test");
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(init.body as string) : undefined;
    const recorded = { method, path: url.pathname, body };
    requests.push(recorded);
    for (const route of routes) {
      const pathMatches =
        typeof route.path === "string"
          ? route.path === url.pathname
          : route.path.test(url.pathname);
      if (route.method === method && pathMatches) {
        const payload =
          typeof route.reply === "function" ? route.reply(recorded) : route.reply;
        return new Response(JSON.stringify(payload), {
          status: route.status ?? 200,
          headers: { "Content-Type": "application/json" },
        });
      }
    }
    return new Response(
      JSON.stringify({ code: "not_found", message: `no route for ${method} ${url.pathname}`, details: null }),
      { status: 404, headers: { "Content-Type": "application/json" } },
    );
  };
  return { fetchImpl, requests };
}

// Payload fixtures shaped exactly like the service responses.

export const MOTOR_SCHEMA: FormSchema = {
  component_class: "http://vocab.test#Motor",
  label: "Motor",
  basic_fields: ["name", "manufacturer", "description"],
  measure_types: [
    {
      iri: "http://om.test/ElectricPotential",
      label: "Electric potential",
      units: [
        { iri: "http://om.test/volt", label: "volt", symbol: "V" },
        { iri: "http://om.test/kilovolt", label: "kilovolt", symbol: "kV" },
      ],
    },
    {
      iri: "http://om.test/Frequency",
      label: "Frequency",
      units: [{ iri: "http://om.test/hertz", label: "hertz", symbol: "Hz" }],
    },
  ],
  fixed_properties: [],
  refinement_properties: [
    {
      property: "http://vocab.test#hasCurrentType",
      label: "has current type",
      candidates: [
        { iri: "http://vocab.test#AC", label: "Alternating current" },
        { iri: "http://vocab.test#DC", label: "Direct current" },
      ],
    },
  ],
};

export const HEAD_SCHEMA: SearchSchema = {
  component_class: "http://vocab.test#ExtrusionHead",
  label: "Extrusion head",
  basic_fields: ["name", "manufacturer", "description"],
  measure_types: [],
  fixed_properties: [],
  refinement_properties: [],
  specializations: [
    { iri: "http://vocab.test#HeadForProfiles", label: "Extrusion head for profiles" },
    { iri: "http://vocab.test#HeadForPipes", label: "Extrusion head for pipes" },
  ],
};

export const PROFILES_SCHEMA: SearchSchema = {
  component_class: "http://vocab.test#HeadForProfiles",
  label: "Extrusion head for profiles",
  basic_fields: ["name", "manufacturer", "description"],
  measure_types: [],
  fixed_properties: [
    {
      property: "http://vocab.test#hasTypeOfExtrudate",
      label: "has type of extrudate",
      value: { iri: "http://vocab.test#Profile", label: "Profile" },
    },
  ],
  refinement_properties: [
    {
      property: "http://vocab.test#hasShapeOfProfile",
      label: "has shape of profile",
      candidates: [
        { iri: "http://vocab.test#Circular", label: "Circular" },
        { iri: "http://vocab.test#NonCircular", label: "Non-circular" },
      ],
    },
  ],
  specializations: [],
};

export const PART_TREE: PartTreeNode = {
  iri: "http://vocab.test#Extruder",
  label: "Extruder",
  children: [
    {
      iri: "http://vocab.test#DriveSystem",
      label: "Drive system",
      children: [
        { iri: "http://vocab.test#Motor", label: "Motor", children: [] },
        { iri: "http://vocab.test#Gearbox", label: "Gearbox", children: [] },
      ],
    },
    { iri: "http://vocab.test#ExtrusionHead", label: "Extrusion head", children: [] },
  ],
};
