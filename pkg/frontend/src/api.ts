import type {
  ComponentData,
  ElementaryWcor,
  ForecastRequest,
  ForecastResponse,
  Grouping,
  GroupingResponse,
  SessionDescriptor,
} from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
  }
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = `${response.status} ${response.statusText}`;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // keep the status line
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

/** Thin typed client over the session endpoints. */
export class ApiClient {
  constructor(public baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl.replace(/\/$/, "")}${path}`;
  }

  createSession(
    values: number[],
    options: { windowLength?: number; nComponents?: number; method?: string } = {},
  ): Promise<SessionDescriptor> {
    const body: Record<string, unknown> = { values };
    if (options.windowLength != null) body.window_length = options.windowLength;
    if (options.nComponents != null) body.n_components = options.nComponents;
    if (options.method != null) body.method = options.method;
    return fetch(this.url("/sessions"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    }).then((r) => asJson<SessionDescriptor>(r));
  }

  getSession(id: string): Promise<SessionDescriptor> {
    return fetch(this.url(`/sessions/${id}`)).then((r) => asJson<SessionDescriptor>(r));
  }

  getComponent(id: string, index: number): Promise<ComponentData> {
    return fetch(this.url(`/sessions/${id}/components/${index}`)).then((r) =>
      asJson<ComponentData>(r),
    );
  }

  putGrouping(id: string, grouping: Grouping): Promise<GroupingResponse> {
    return fetch(this.url(`/sessions/${id}/grouping`), {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(grouping),
    }).then((r) => asJson<GroupingResponse>(r));
  }

  getWcor(id: string): Promise<ElementaryWcor> {
    return fetch(this.url(`/sessions/${id}/wcor`)).then((r) => asJson<ElementaryWcor>(r));
  }

  forecast(id: string, request: ForecastRequest): Promise<ForecastResponse> {
    return fetch(this.url(`/sessions/${id}/forecast`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    }).then((r) => asJson<ForecastResponse>(r));
  }
}
