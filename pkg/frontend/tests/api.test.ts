import { describe, expect, it, vi } from 'vitest';

import { ApiClient, ApiError, ServiceUnreachableError, buildVideoQuery } from '../src/api.js';

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

describe('query building', () => {
  it('includes only set filters', () => {
    expect(buildVideoQuery({}, 1, 50)).toBe('page=1&page_size=50');
    expect(buildVideoQuery({ ad_type: 'undisclosed', user: 'beauty_minor' }, 2, 10)).toBe(
      'user=beauty_minor&ad_type=undisclosed&page=2&page_size=10',
    );
  });
});

describe('ApiClient', () => {
  it('lists videos with filter passthrough', async () => {
    const fetchFn = vi.fn(async () =>
      jsonResponse({ items: [], page: 1, pages: 1, total: 0 }),
    );
    const client = new ApiClient('http://x', fetchFn as unknown as typeof fetch);
    const page = await client.listVideos({ ad_type: 'formal' });
    expect(page.total).toBe(0);
    expect(fetchFn).toHaveBeenCalledWith(
      'http://x/api/videos?ad_type=formal&page=1&page_size=50',
      undefined,
    );
  });

  it('walks all pages when collecting ids', async () => {
    const pages = [
      { items: [{ video_id: 'a' }, { video_id: 'b' }], page: 1, pages: 2, total: 3 },
      { items: [{ video_id: 'c' }], page: 2, pages: 2, total: 3 },
    ];
    let call = 0;
    const fetchFn = vi.fn(async () => jsonResponse(pages[call++]));
    const client = new ApiClient('', fetchFn as unknown as typeof fetch);
    expect(await client.listAllVideoIds({})).toEqual(['a', 'b', 'c']);
    expect(fetchFn).toHaveBeenCalledTimes(2);
  });

  it('posts annotations as JSON', async () => {
    const fetchFn = vi.fn(async () => jsonResponse({ ok: true, replaced: false }, 201));
    const client = new ApiClient('', fetchFn as unknown as typeof fetch);
    const out = await client.postAnnotation({
      annotator_id: 'a1',
      video_id: 'v1',
      ad_type: 'formal',
      ad_topic: 'other',
    });
    expect(out.replaced).toBe(false);
    const [, init] = fetchFn.mock.calls[0] as unknown as [string, RequestInit];
    expect(init.method).toBe('POST');
    expect(JSON.parse(init.body as string).ad_type).toBe('formal');
  });

  it('surfaces API errors with the server detail', async () => {
    const fetchFn = vi.fn(async () => jsonResponse({ detail: 'unknown video' }, 404));
    const client = new ApiClient('', fetchFn as unknown as typeof fetch);
    await expect(client.getVideo('zzz')).rejects.toThrowError(ApiError);
    await expect(client.getVideo('zzz')).rejects.toThrow(/unknown video/);
  });

  it('maps network failure to ServiceUnreachableError', async () => {
    const fetchFn = vi.fn(async () => {
      throw new TypeError('fetch failed');
    });
    const client = new ApiClient('http://nope', fetchFn as unknown as typeof fetch);
    await expect(client.listVideos({})).rejects.toThrowError(ServiceUnreachableError);
  });
});
