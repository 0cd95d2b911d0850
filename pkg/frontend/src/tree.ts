/**
 * Three-level device tree (domain → family → member) built from the flat
 * name list the database browse route returns.
 */

export interface MemberNode {
  name: string;
  device: string; // full "domain/family/member"
}

export interface FamilyNode {
  name: string;
  members: MemberNode[];
}

export interface DomainNode {
  name: string;
  families: FamilyNode[];
}

export interface DeviceTree {
  domains: DomainNode[];
  /** true when the last refresh failed and the tree shows stale data */
  stale: boolean;
}

export function buildTree(names: string[]): DeviceTree {
  const domains = new Map<string, Map<string, MemberNode[]>>();
  for (const full of names) {
    const parts = full.split("/");
    if (parts.length !== 3) continue;
    const [domain, family, member] = parts as [string, string, string];
    let families = domains.get(domain);
    if (!families) domains.set(domain, (families = new Map()));
    let members = families.get(family);
    if (!members) families.set(family, (members = []));
    members.push({ name: member, device: full });
  }
  const sorted = [...domains.keys()].sort();
  return {
    stale: false,
    domains: sorted.map((domain) => ({
      name: domain,
      families: [...domains.get(domain)!.keys()].sort().map((family) => ({
        name: family,
        members: domains
          .get(domain)!
          .get(family)!
          .slice()
          .sort((a, b) => a.name.localeCompare(b.name)),
      })),
    })),
  };
}

export function deviceCount(tree: DeviceTree): number {
  let n = 0;
  for (const d of tree.domains)
    for (const f of d.families) n += f.members.length;
  return n;
}
