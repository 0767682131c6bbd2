// Thin client over the review API. The UI never derives labels itself:
// every predicted label shown comes from these endpoints verbatim.

import type {
  AnnotationRecord,
  VideoDetail,
  VideoFilters,
  VideoListPage,
} from './types.js';

export class ServiceUnreachableError extends Error {
  constructor(cause: unknown) {
    super(`review service unreachable: ${String(cause)}`);
    this.name = 'ServiceUnreachableError';
  }
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
    this.name = 'ApiError';
  }
}

export function buildVideoQuery(filters: VideoFilters, page: number, pageSize: number): string {
  const params = new URLSearchParams();
  if (filters.user) params.set('user', filters.user);
  if (filters.ad_type) params.set('ad_type', filters.ad_type);
  if (filters.ad_topic) params.set('ad_topic', filters.ad_topic);
  params.set('page', String(page));
  params.set('page_size', String(pageSize));
  return params.toString();
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = fetch,
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    let resp: Response;
    try {
      resp = await this.fetchFn(`${this.baseUrl}${path}`, init);
    } catch (err) {
      throw new ServiceUnreachableError(err);
    }
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = (await resp.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(resp.status, detail);
    }
    return resp;
  }

  async listVideos(filters: VideoFilters, page = 1, pageSize = 50): Promise<VideoListPage> {
    const query = buildVideoQuery(filters, page, pageSize);
    const resp = await this.request(`/api/videos?${query}`);
    return (await resp.json()) as VideoListPage;
  }

  /** Walk every page of a filtered listing and collect the ids, in order. */
  async listAllVideoIds(filters: VideoFilters, pageSize = 200): Promise<string[]> {
    const ids: string[] = [];
    let page = 1;
    for (;;) {
      const data = await this.listVideos(filters, page, pageSize);
      ids.push(...data.items.map((item) => item.video_id));
      if (page >= data.pages) break;
      page += 1;
    }
    return ids;
  }

  async getVideo(videoId: string): Promise<VideoDetail> {
    const resp = await this.request(`/api/videos/${encodeURIComponent(videoId)}`);
    return (await resp.json()) as VideoDetail;
  }

  async postAnnotation(record: AnnotationRecord): Promise<{ ok: boolean; replaced: boolean }> {
    const resp = await this.request('/api/annotations', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(record),
    });
    return (await resp.json()) as { ok: boolean; replaced: boolean };
  }

  /** NDJSON export, byte-compatible with `audit validate` inputs. */
  async exportAnnotations(annotatorId: string): Promise<string> {
    const resp = await this.request(
      `/api/annotations/export?annotator=${encodeURIComponent(annotatorId)}`,
    );
    return await resp.text();
  }

  async metricsSummary(): Promise<unknown> {
    const resp = await this.request('/api/metrics/summary');
    return await resp.json();
  }
}
