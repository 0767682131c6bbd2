// Payload types mirroring the review API exactly; field names match the
// server's canonical record schemas.

export type AdType = 'formal' | 'disclosed' | 'undisclosed' | 'non_ad';
export type AdTopic = 'beauty' | 'fitness' | 'gaming' | 'politics' | 'other';

export const AD_TYPES: AdType[] = ['formal', 'disclosed', 'undisclosed', 'non_ad'];
export const AD_TOPICS: AdTopic[] = ['beauty', 'fitness', 'gaming', 'politics', 'other'];

export interface VideoListItem {
  video_id: string;
  user_id: string;
  ad_type: AdType;
  ad_topic: AdTopic | null;
  thumbnail: string;
  description: string;
}

export interface VideoListPage {
  items: VideoListItem[];
  page: number;
  pages: number;
  total: number;
}

export interface VideoPayload {
  video_id: string;
  author: string;
  description: string;
  hashtags: string[];
  transcript?: string;
  duration_s: number;
  overlay_label: string;
  commercial_indicators: string[];
  frames: [string, string, string];
}

export interface Classification {
  is_ad: boolean;
  ad_type: AdType;
  ad_topic: AdTopic | null;
  indicators_found: string[];
  reasoning: string;
}

export interface AnnotationRecord {
  annotator_id: string;
  video_id: string;
  ad_type: AdType;
  ad_topic?: AdTopic;
}

export interface VideoDetail {
  video: VideoPayload;
  user_id: string;
  session_index: number;
  position: number;
  classification: Classification;
  annotations: AnnotationRecord[];
}

export interface VideoFilters {
  user?: string;
  ad_type?: AdType;
  ad_topic?: AdTopic;
}
