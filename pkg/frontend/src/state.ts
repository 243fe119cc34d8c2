import { ApiClient } from "./api.js";
import type {
  ComponentData,
  ElementaryWcor,
  ForecastResponse,
  Grouping,
  GroupingResponse,
  IntervalSpec,
  SessionDescriptor,
} from "./types.js";

export type ViewName = "gallery" | "scatter" | "wcor" | "reconstruction" | "forecast";

/**
 * Client-side session state.  The grouping always mirrors the server: an
 * assignment first goes through PUT and only a successful response mutates
 * local state, so what the panels show is exactly what the server computed.
 */
export class WorkbenchStore {
  session: SessionDescriptor | null = null;
  grouping: Grouping = {};
  reconstruction: GroupingResponse | null = null;
  components = new Map<number, ComponentData>();
  wcor: ElementaryWcor | null = null;
  forecast: ForecastResponse | null = null;
  view: ViewName = "gallery";
  page = 0;
  error: string | null = null;

  private listeners: Array<() => void> = [];

  constructor(public api: ApiClient, public pageSize = 6) {}

  subscribe(listener: () => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  /** Total number of computed eigentriples in the session. */
  get componentCount(): number {
    return this.session ? this.session.contributions.length : 0;
  }

  get pageCount(): number {
    return Math.max(1, Math.ceil(this.componentCount / this.pageSize));
  }

  /** 1-based eigentriple indices on the current gallery page. */
  pageIndices(): number[] {
    const start = this.page * this.pageSize + 1;
    const stop = Math.min(this.componentCount, start + this.pageSize - 1);
    const out: number[] = [];
    for (let m = start; m <= stop; m++) out.push(m);
    return out;
  }

  /** Adjacent index pairs (1,2) ... (k-1,k) for the scatter view. */
  scatterPairs(): Array<[number, number]> {
    const pairs: Array<[number, number]> = [];
    for (let m = 1; m < this.componentCount; m++) pairs.push([m, m + 1]);
    return pairs;
  }

  async load(
    values: number[],
    options: { windowLength?: number; nComponents?: number; method?: string } = {},
  ): Promise<void> {
    this.error = null;
    try {
      this.session = await this.api.createSession(values, options);
      this.grouping = {};
      this.reconstruction = null;
      this.forecast = null;
      this.wcor = null;
      this.components.clear();
      this.page = 0;
      await this.fetchPageComponents();
    } catch (err) {
      this.error = String((err as Error).message ?? err);
    }
    this.notify();
  }

  async fetchPageComponents(): Promise<void> {
    if (!this.session) return;
    const wanted = this.pageIndices().filter((m) => !this.components.has(m));
    const fetched = await Promise.all(
      wanted.map((m) => this.api.getComponent(this.session!.id, m)),
    );
    for (const component of fetched) this.components.set(component.index, component);
  }

  async setPage(page: number): Promise<void> {
    this.page = Math.max(0, Math.min(page, this.pageCount - 1));
    this.error = null;
    try {
      await this.fetchPageComponents();
    } catch (err) {
      this.error = String((err as Error).message ?? err);
    }
    this.notify();
  }

  setView(view: ViewName): void {
    this.view = view;
    this.notify();
  }

  /**
   * Next grouping after moving `indices` into `groupName` atomically:
   * the indices leave whichever group currently holds them, groups emptied
   * by the move disappear, and the target group is kept sorted.
   */
  nextGrouping(indices: number[], groupName: string): Grouping {
    const moved = new Set(indices);
    const next: Grouping = {};
    for (const [name, members] of Object.entries(this.grouping)) {
      const kept = members.filter((m) => !moved.has(m));
      if (kept.length > 0) next[name] = kept;
    }
    const target = new Set(next[groupName] ?? []);
    for (const m of indices) target.add(m);
    next[groupName] = [...target].sort((a, b) => a - b);
    return next;
  }

  async assignGroups(indices: number[], groupName: string): Promise<boolean> {
    if (!this.session) return false;
    const name = groupName.trim();
    if (indices.length === 0 || !name) {
      this.error = "select at least one eigentriple and a group name";
      this.notify();
      return false;
    }
    return this.putGrouping(this.nextGrouping(indices, name));
  }

  async removeGroup(groupName: string): Promise<boolean> {
    const next: Grouping = {};
    for (const [name, members] of Object.entries(this.grouping)) {
      if (name !== groupName) next[name] = members;
    }
    return this.putGrouping(next);
  }

  /** PUT the grouping; local state changes only on server acknowledgment. */
  async putGrouping(grouping: Grouping): Promise<boolean> {
    if (!this.session) return false;
    this.error = null;
    try {
      const response = await this.api.putGrouping(this.session.id, grouping);
      this.grouping = grouping;
      this.reconstruction = response;
      this.notify();
      return true;
    } catch (err) {
      this.error = String((err as Error).message ?? err);
      this.notify();
      return false;
    }
  }

  /** Re-read the server's grouping (reconciliation after a PUT). */
  async refreshGrouping(): Promise<Grouping> {
    if (!this.session) return {};
    const state = await this.api.getSession(this.session.id);
    this.grouping = state.grouping ?? {};
    this.notify();
    return this.grouping;
  }

  async fetchWcor(): Promise<void> {
    if (!this.session) return;
    this.error = null;
    try {
      this.wcor = await this.api.getWcor(this.session.id);
    } catch (err) {
      this.error = String((err as Error).message ?? err);
    }
    this.notify();
  }

  async runForecast(
    group: string,
    horizon: number,
    options: { method?: "recurrent" | "vector"; intervals?: IntervalSpec | null } = {},
  ): Promise<boolean> {
    if (!this.session) return false;
    if (!Number.isInteger(horizon) || horizon < 1) {
      this.error = "forecast horizon must be a positive integer";
      this.notify();
      return false;
    }
    if (!(group in this.grouping)) {
      this.error = `unknown group "${group}"; assign eigentriples to it first`;
      this.notify();
      return false;
    }
    this.error = null;
    try {
      this.forecast = await this.api.forecast(this.session.id, {
        group,
        horizon,
        method: options.method,
        intervals: options.intervals ?? undefined,
      });
      this.notify();
      return true;
    } catch (err) {
      this.error = String((err as Error).message ?? err);
      this.notify();
      return false;
    }
  }
}
