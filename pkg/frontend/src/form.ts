// Annotation form state and the coherence rule it must enforce:
// a non-ad carries no topic, an ad always carries one.

import type { AdTopic, AdType, AnnotationRecord } from './types.js';

export interface AnnotationForm {
  adType: AdType | '';
  adTopic: AdTopic | '';
}

export function emptyForm(): AnnotationForm {
  return { adType: '', adTopic: '' };
}

/** Prefill from an existing record (re-opening a labelled video). */
export function formFromRecord(record: AnnotationRecord): AnnotationForm {
  return { adType: record.ad_type, adTopic: record.ad_topic ?? '' };
}

export function topicDisabled(form: AnnotationForm): boolean {
  return form.adType === 'non_ad';
}

/** Normalize after an ad-type change: picking non_ad clears the topic. */
export function withAdType(form: AnnotationForm, adType: AdType | ''): AnnotationForm {
  return { adType, adTopic: adType === 'non_ad' ? '' : form.adTopic };
}

export function validateForm(form: AnnotationForm): string[] {
  const errors: string[] = [];
  if (!form.adType) {
    errors.push('choose an ad type');
    return errors;
  }
  if (form.adType === 'non_ad' && form.adTopic) {
    errors.push('a non-ad cannot carry a topic');
  }
  if (form.adType !== 'non_ad' && !form.adTopic) {
    errors.push('an ad needs a topic');
  }
  return errors;
}

export function toRecord(
  annotatorId: string,
  videoId: string,
  form: AnnotationForm,
): AnnotationRecord {
  const errors = validateForm(form);
  if (errors.length > 0) {
    throw new Error(`invalid annotation: ${errors.join('; ')}`);
  }
  const record: AnnotationRecord = {
    annotator_id: annotatorId,
    video_id: videoId,
    ad_type: form.adType as AdType,
  };
  if (form.adType !== 'non_ad') {
    record.ad_topic = form.adTopic as AdTopic;
  }
  return record;
}

/**
 * The stored label this annotator would overwrite with a DIFFERENT value,
 * if any; the UI confirms before replacing it.
 */
export function conflictingAnnotation(
  existing: AnnotationRecord[],
  annotatorId: string,
  form: AnnotationForm,
): AnnotationRecord | null {
  const mine = existing.find((a) => a.annotator_id === annotatorId);
  if (!mine) return null;
  const same = mine.ad_type === form.adType && (mine.ad_topic ?? '') === form.adTopic;
  return same ? null : mine;
}
