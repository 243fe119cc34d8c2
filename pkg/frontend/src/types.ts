/** Payload shapes of the decomposition service. */

export interface SessionDescriptor {
  id: string;
  N: number;
  L: number;
  K: number;
  d: number;
  contributions: number[];
  grouping?: Record<string, number[]>;
}

export interface ComponentData {
  index: number;
  sigma: number;
  contribution: number;
  eigenvector: number[];
  factor_vector: number[];
  elementary: number[];
  periodogram: number[];
}

export interface GroupWcor {
  order: string[];
  values: number[][];
}

export interface GroupingResponse {
  groups: Record<string, number[]>;
  residual: number[];
  wcor: GroupWcor;
}

export interface ElementaryWcor {
  order: number;
  values: number[][];
}

export interface IntervalSpec {
  level?: number;
  n_surrogates?: number;
  seed?: number | null;
}

export interface ForecastRequest {
  group: string;
  horizon: number;
  method?: "recurrent" | "vector";
  intervals?: IntervalSpec | null;
}

export interface ForecastResponse {
  group: string;
  method: string;
  fitted: number[];
  values: number[];
  lower?: number[];
  upper?: number[];
  level?: number;
  degenerate_intervals?: boolean;
}

export type Grouping = Record<string, number[]>;
