/**
 * Typed client for the adauthor HTTP service.
 *
 * Every method maps 1:1 onto a service endpoint; domain errors arrive as
 * `{error: {status, code, message, detail}}` bodies and are rethrown as
 * ApiError so the UI can render the code in an error banner.
 */

export interface Slot {
  start_ms: number;
  end_ms: number;
}

export interface DescriptionDto {
  id: string;
  variation_id: string;
  slot: Slot;
  text: string;
  author_kind: string;
  author_name: string;
  created_at: number;
  modified_at: number;
  guideline_rationale: string | null;
  warnings: string[];
}

export interface TagSetDto {
  predefined: [string, string][];
  custom: string[];
}

export interface VariationDto {
  id: string;
  video_id: string;
  name: string;
  author_name: string;
  parent_id: string | null;
  fork_count: number;
  tags: TagSetDto;
  custom_instructions: string | null;
  created_at: number;
}

export interface VariationDetailDto extends VariationDto {
  descriptions: DescriptionDto[];
}

export interface DiffOpDto {
  op: "equal" | "insert" | "delete";
  tokens: string[];
}

export interface ProposalDto {
  description_id: string;
  proposed_text: string | null;
  error: string | null;
  diff?: DiffOpDto[];
}

export interface VideoDto {
  id: string;
  title: string;
  duration_ms: number;
}

export interface JobDto {
  id: string;
  state: "queued" | "running" | "done" | "failed";
  progress: number;
  result: unknown;
  error: string | null;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
    public readonly detail: unknown = null,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(private readonly baseUrl: string) {}

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    raw = false,
  ): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, {
        method,
        headers:
          body === undefined || raw
            ? undefined
            : { "content-type": "application/json" },
        body:
          body === undefined
            ? undefined
            : raw
              ? (body as string)
              : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(0, "Unreachable", `service unreachable: ${err}`);
    }
    if (!response.ok) {
      let code = "HttpError";
      let message = `${response.status} ${response.statusText}`;
      let detail: unknown = null;
      try {
        const payload = (await response.json()) as {
          error?: { code: string; message: string; detail: unknown };
        };
        if (payload.error) {
          code = payload.error.code;
          message = payload.error.message;
          detail = payload.error.detail;
        }
      } catch {
        /* non-JSON error body: keep the HTTP status text */
      }
      throw new ApiError(response.status, code, message, detail);
    }
    if (response.status === 204) return undefined as T;
    const contentType = response.headers.get("content-type") ?? "";
    if (!contentType.includes("json")) {
      return (await response.text()) as T;
    }
    return (await response.json()) as T;
  }

  listVideos(): Promise<VideoDto[]> {
    return this.request("GET", "/videos");
  }

  listVariations(videoId: string): Promise<VariationDto[]> {
    return this.request("GET", `/videos/${videoId}/variations`);
  }

  getVariation(variationId: string): Promise<VariationDetailDto> {
    return this.request("GET", `/variations/${variationId}`);
  }

  createVariation(
    videoId: string,
    name: string,
    authorName: string,
    customInstructions?: string,
  ): Promise<{ variation: VariationDto; job_id?: string }> {
    return this.request("POST", `/videos/${videoId}/variations`, {
      name,
      author_name: authorName,
      custom_instructions: customInstructions ?? null,
    });
  }

  fork(variationId: string, authorName: string, name?: string): Promise<VariationDto> {
    return this.request("POST", `/variations/${variationId}/fork`, {
      author_name: authorName,
      name: name ?? null,
    });
  }

  setTags(variationId: string, tags: TagSetDto): Promise<VariationDto> {
    return this.request("PUT", `/variations/${variationId}/tags`, tags);
  }

  addDescription(
    variationId: string,
    slot: Slot,
    text: string,
    authorName: string,
  ): Promise<DescriptionDto> {
    return this.request("POST", `/variations/${variationId}/descriptions`, {
      slot,
      text,
      author_name: authorName,
    });
  }

  editDescriptionText(
    descriptionId: string,
    text: string,
    authorName: string,
  ): Promise<DescriptionDto> {
    return this.request("PATCH", `/descriptions/${descriptionId}`, {
      text,
      author_name: authorName,
    });
  }

  revise(
    variationId: string,
    descriptionIds: string[],
    prompt: string,
    promptCategory?: string,
  ): Promise<{ proposals: ProposalDto[] }> {
    return this.request("POST", `/variations/${variationId}/revise`, {
      prompt,
      description_ids: descriptionIds,
      prompt_category: promptCategory ?? null,
    });
  }

  resolve(descriptionId: string, decision: "ACCEPT" | "REJECT"): Promise<DescriptionDto> {
    return this.request("POST", `/descriptions/${descriptionId}/resolve`, {
      decision,
    });
  }

  exportVtt(variationId: string): Promise<string> {
    return this.request("GET", `/variations/${variationId}/export.vtt`);
  }

  getJob(jobId: string): Promise<JobDto> {
    return this.request("GET", `/jobs/${jobId}`);
  }
}
