// Single-page review tool: filterable video list, per-video detail with
// frame text cards and the classifier's output, and the annotation form.
// All data comes from the review API; annotations are the only writes.

import { ApiClient, ApiError, ServiceUnreachableError } from './api.js';
import {
  AnnotationForm,
  conflictingAnnotation,
  emptyForm,
  formFromRecord,
  toRecord,
  topicDisabled,
  validateForm,
  withAdType,
} from './form.js';
import { AD_TOPICS, AD_TYPES, VideoDetail, VideoFilters, VideoListPage } from './types.js';

const api = new ApiClient('');

interface UiState {
  filters: VideoFilters;
  page: number;
  listing: VideoListPage | null;
  detail: VideoDetail | null;
  form: AnnotationForm;
  banner: string;
  notice: string;
}

const state: UiState = {
  filters: {},
  page: 1,
  listing: null,
  detail: null,
  form: emptyForm(),
  banner: '',
  notice: '',
};

function annotatorId(): string {
  return localStorage.getItem('annotator_id') ?? '';
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  node.append(...children);
  return node;
}

function option(value: string, label: string, selected: boolean): HTMLOptionElement {
  const opt = el('option', { value }, label);
  opt.selected = selected;
  return opt;
}

async function refreshList(): Promise<void> {
  try {
    state.listing = await api.listVideos(state.filters, state.page);
    state.banner = '';
  } catch (err) {
    state.listing = null;
    state.banner =
      err instanceof ServiceUnreachableError
        ? 'Cannot reach the review service. Is `audit serve` running?'
        : String(err);
  }
  render();
}

async function openDetail(videoId: string): Promise<void> {
  try {
    state.detail = await api.getVideo(videoId);
    const mine = state.detail.annotations.find((a) => a.annotator_id === annotatorId());
    state.form = mine ? formFromRecord(mine) : emptyForm();
    state.notice = mine ? 'showing your stored label' : '';
    state.banner = '';
  } catch (err) {
    state.banner = String(err);
  }
  render();
}

async function saveAnnotation(): Promise<void> {
  const detail = state.detail;
  if (!detail) return;
  const who = annotatorId().trim();
  if (!who) {
    state.notice = 'set your annotator id first (top right)';
    render();
    return;
  }
  const errors = validateForm(state.form);
  if (errors.length > 0) {
    state.notice = errors.join('; ');
    render();
    return;
  }
  const conflict = conflictingAnnotation(detail.annotations, who, state.form);
  if (conflict) {
    const topic = conflict.ad_topic ? ` / ${conflict.ad_topic}` : '';
    if (!window.confirm(`Replace your stored label (${conflict.ad_type}${topic})?`)) {
      return;
    }
  }
  try {
    await api.postAnnotation(toRecord(who, detail.video.video_id, state.form));
    await openDetail(detail.video.video_id);
    state.notice = 'saved';
  } catch (err) {
    state.notice = err instanceof ApiError ? err.detail : String(err);
  }
  render();
}

function filterBar(): HTMLElement {
  const userInput = el('input', {
    type: 'text',
    placeholder: 'user id',
    value: state.filters.user ?? '',
  });
  userInput.addEventListener('change', () => {
    state.filters = { ...state.filters, user: userInput.value || undefined };
    state.page = 1;
    void refreshList();
  });

  const typeSelect = el('select', {}, option('', 'any ad type', !state.filters.ad_type));
  for (const t of AD_TYPES) typeSelect.append(option(t, t, state.filters.ad_type === t));
  typeSelect.addEventListener('change', () => {
    state.filters = {
      ...state.filters,
      ad_type: (typeSelect.value || undefined) as VideoFilters['ad_type'],
    };
    state.page = 1;
    void refreshList();
  });

  const topicSelect = el('select', {}, option('', 'any topic', !state.filters.ad_topic));
  for (const t of AD_TOPICS) topicSelect.append(option(t, t, state.filters.ad_topic === t));
  topicSelect.addEventListener('change', () => {
    state.filters = {
      ...state.filters,
      ad_topic: (topicSelect.value || undefined) as VideoFilters['ad_topic'],
    };
    state.page = 1;
    void refreshList();
  });

  return el('div', { class: 'filters' }, userInput, typeSelect, topicSelect);
}

function listPane(): HTMLElement {
  const pane = el('div', { class: 'list-pane' }, filterBar());
  const listing = state.listing;
  if (!listing) return pane;
  if (listing.total === 0) {
    pane.append(el('p', { class: 'empty' }, 'No videos match these filters.'));
    return pane;
  }
  const table = el('table', { class: 'video-list' });
  table.append(
    el('tr', {}, ...['video', 'user', 'predicted', 'topic'].map((h) => el('th', {}, h))),
  );
  for (const item of listing.items) {
    const row = el(
      'tr',
      { class: state.detail?.video.video_id === item.video_id ? 'selected' : '' },
      el('td', {}, item.video_id),
      el('td', {}, item.user_id),
      el('td', { class: `badge badge-${item.ad_type}` }, item.ad_type),
      el('td', {}, item.ad_topic ?? '-'),
    );
    row.addEventListener('click', () => void openDetail(item.video_id));
    table.append(row);
  }
  const prev = el('button', {}, 'prev');
  const next = el('button', {}, 'next');
  prev.disabled = listing.page <= 1;
  next.disabled = listing.page >= listing.pages;
  prev.addEventListener('click', () => {
    state.page -= 1;
    void refreshList();
  });
  next.addEventListener('click', () => {
    state.page += 1;
    void refreshList();
  });
  pane.append(
    table,
    el(
      'div',
      { class: 'pager' },
      prev,
      ` page ${listing.page}/${listing.pages} (${listing.total} videos) `,
      next,
    ),
  );
  return pane;
}

function annotationFormPane(detail: VideoDetail): HTMLElement {
  const typeSelect = el('select', {}, option('', 'ad type...', state.form.adType === ''));
  for (const t of AD_TYPES) typeSelect.append(option(t, t, state.form.adType === t));
  typeSelect.addEventListener('change', () => {
    state.form = withAdType(state.form, typeSelect.value as AnnotationForm['adType']);
    render();
  });

  const topicSelect = el('select', {}, option('', 'topic...', state.form.adTopic === ''));
  for (const t of AD_TOPICS) topicSelect.append(option(t, t, state.form.adTopic === t));
  topicSelect.disabled = topicDisabled(state.form);
  topicSelect.addEventListener('change', () => {
    state.form = { ...state.form, adTopic: topicSelect.value as AnnotationForm['adTopic'] };
    render();
  });

  const save = el('button', { class: 'save' }, 'save label');
  save.addEventListener('click', () => void saveAnnotation());

  const stored = detail.annotations.map((a) =>
    el(
      'li',
      {},
      `${a.annotator_id}: ${a.ad_type}${a.ad_topic ? ` / ${a.ad_topic}` : ''}`,
    ),
  );
  return el(
    'div',
    { class: 'annotate' },
    el('h3', {}, 'your annotation'),
    typeSelect,
    topicSelect,
    save,
    state.notice ? el('p', { class: 'notice' }, state.notice) : '',
    stored.length ? el('h4', {}, 'stored labels') : '',
    el('ul', {}, ...stored),
  );
}

function detailPane(): HTMLElement {
  const detail = state.detail;
  if (!detail) {
    return el('div', { class: 'detail-pane' }, el('p', { class: 'empty' }, 'Select a video.'));
  }
  const video = detail.video;
  const cls = detail.classification;
  const frames = el(
    'div',
    { class: 'frames' },
    ...video.frames.map((text, i) =>
      el('div', { class: 'frame-card' }, el('h4', {}, ['begin', 'middle', 'end'][i] ?? ''), text),
    ),
  );
  const meta = el(
    'dl',
    {},
    el('dt', {}, 'author'), el('dd', {}, video.author),
    el('dt', {}, 'description'), el('dd', {}, video.description),
    el('dt', {}, 'hashtags'), el('dd', {}, video.hashtags.join(' ') || '-'),
    el('dt', {}, 'transcript'), el('dd', {}, video.transcript ?? '-'),
    el('dt', {}, 'duration'), el('dd', {}, `${video.duration_s.toFixed(1)}s`),
    el('dt', {}, 'overlay'), el('dd', {}, video.overlay_label),
    el('dt', {}, 'seen by'), el('dd', {}, `${detail.user_id} (session ${detail.session_index}, position ${detail.position})`),
  );
  const prediction = el(
    'div',
    { class: 'prediction' },
    el('h3', {}, 'pipeline output'),
    el('p', {}, el('span', { class: `badge badge-${cls.ad_type}` }, cls.ad_type), ' ',
      cls.ad_topic ?? ''),
    el('p', {}, `indicators: ${cls.indicators_found.join(', ') || 'none'}`),
    el('p', { class: 'reasoning' }, cls.reasoning),
  );
  return el(
    'div',
    { class: 'detail-pane' },
    el('h2', {}, video.video_id),
    frames,
    meta,
    prediction,
    annotationFormPane(detail),
  );
}

function render(): void {
  const root = document.getElementById('app');
  if (!root) return;
  root.replaceChildren();

  const idInput = el('input', {
    type: 'text',
    placeholder: 'annotator id',
    value: annotatorId(),
  });
  idInput.addEventListener('change', () => {
    localStorage.setItem('annotator_id', idInput.value.trim());
  });

  root.append(
    el('header', {}, el('h1', {}, 'audit review'), idInput),
    state.banner ? el('div', { class: 'banner' }, state.banner) : '',
    el('main', {}, listPane(), detailPane()),
  );
}

void refreshList();
