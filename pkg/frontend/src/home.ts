// Home screen entries and their role gating.

export type Role = "anonymous" | "customer" | "admin";

export interface HomeEntry {
  id: string;
  title: string;
  minimumRole: Role;
}

const RANK: Record<Role, number> = { anonymous: 0, customer: 1, admin: 2 };

export const HOME_ENTRIES: HomeEntry[] = [
  { id: "catalogue", title: "Catalogue", minimumRole: "anonymous" },
  { id: "search", title: "Searching module", minimumRole: "anonymous" },
  { id: "technician", title: "Virtual technician", minimumRole: "customer" },
  { id: "admin", title: "Admin zone", minimumRole: "admin" },
];

export function visibleEntries(role: Role): HomeEntry[] {
  return HOME_ENTRIES.filter((entry) => RANK[role] >= RANK[entry.minimumRole]);
}
